#include "streamcode/reed_muller.hpp"

#include <algorithm>
#include <numeric>

#include "streamcode/errors.hpp"

namespace streamcode {

namespace {

void enumerate_monomials(unsigned vars, unsigned budget, std::vector<unsigned>& current,
                         std::vector<std::vector<unsigned>>& out) {
    if (current.size() == vars) {
        out.push_back(current);
        return;
    }
    for (unsigned e = 0; e <= budget; ++e) {
        current.push_back(e);
        enumerate_monomials(vars, budget - e, current, out);
        current.pop_back();
    }
}

unsigned total(const std::vector<unsigned>& exps) { return std::accumulate(exps.begin(), exps.end(), 0U); }

}  // namespace

ReedMuller::ReedMuller(FieldPtr field, unsigned variables, unsigned degree)
    : field_(std::move(field)), variables_(variables), degree_(degree) {
    if (variables == 0) throw InvalidArgument("Reed-Muller needs at least one variable");
    if (degree >= field_->size()) throw InvalidArgument("Reed-Muller degree must be below the field size");
    num_points_ = 1;
    for (unsigned i = 0; i < variables; ++i) num_points_ *= field_->size();

    std::vector<unsigned> current;
    enumerate_monomials(variables, degree, current, monomials_);
    std::stable_sort(monomials_.begin(), monomials_.end(),
                     [](const auto& a, const auto& b) { return total(a) < total(b); });

    const std::size_t m = monomials_.size();
    linalg::Matrix selected(0, m);
    for (std::size_t idx = 0; idx < num_points_ && systematic_.size() < m; ++idx) {
        const auto row = monomial_row(point(idx));
        linalg::Matrix trial = selected;
        trial.rows += 1;
        trial.data.insert(trial.data.end(), row.begin(), row.end());
        if (linalg::rank(*field_, trial) == trial.rows) {
            selected = std::move(trial);
            systematic_.push_back(idx);
        }
    }
    if (systematic_.size() != m) throw InvalidArgument("no systematic point set found");
    auto inv = linalg::inverse(*field_, selected);
    if (!inv) throw InvalidArgument("systematic evaluation matrix is singular");
    to_coeffs_ = std::move(*inv);
}

std::vector<Symbol> ReedMuller::point(std::size_t index) const {
    std::vector<Symbol> p(variables_);
    for (unsigned i = variables_; i-- > 0;) {
        p[i] = static_cast<Symbol>(index % field_->size());
        index /= field_->size();
    }
    return p;
}

std::size_t ReedMuller::index_of(std::span<const Symbol> point) const {
    std::size_t idx = 0;
    for (Symbol c : point) idx = idx * field_->size() + c;
    return idx;
}

std::vector<Symbol> ReedMuller::monomial_row(std::span<const Symbol> point) const {
    std::vector<Symbol> row(monomials_.size());
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
        Symbol v = 1;
        for (unsigned i = 0; i < variables_; ++i) v = field_->mul(v, field_->pow(point[i], monomials_[j][i]));
        row[j] = v;
    }
    return row;
}

std::vector<Symbol> ReedMuller::coefficients(std::span<const Symbol> msg) const {
    if (msg.size() != msg_len()) throw LengthMismatch("Reed-Muller message has wrong length");
    std::vector<Symbol> coeffs(msg_len(), 0);
    for (std::size_t r = 0; r < msg_len(); ++r)
        for (std::size_t c = 0; c < msg_len(); ++c) coeffs[r] ^= field_->mul(to_coeffs_.at(r, c), msg[c]);
    return coeffs;
}

std::vector<Symbol> ReedMuller::encode(std::span<const Symbol> msg) const {
    const auto coeffs = coefficients(msg);
    std::vector<Symbol> out(num_points_);
    for (std::size_t idx = 0; idx < num_points_; ++idx) {
        const auto row = monomial_row(point(idx));
        Symbol acc = 0;
        for (std::size_t j = 0; j < row.size(); ++j) acc ^= field_->mul(row[j], coeffs[j]);
        out[idx] = acc;
    }
    return out;
}

linalg::Matrix ReedMuller::generator() const {
    linalg::Matrix eval(num_points_, msg_len());
    for (std::size_t idx = 0; idx < num_points_; ++idx) {
        const auto row = monomial_row(point(idx));
        std::copy(row.begin(), row.end(), eval.data.begin() + static_cast<std::ptrdiff_t>(idx * msg_len()));
    }
    return linalg::multiply(*field_, eval, to_coeffs_);
}

}  // namespace streamcode
