#include "vvlab/functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vvlab {

std::string to_string(FnTag tag) {
    switch (tag) {
        case FnTag::zero: return "zero";
        case FnTag::constant: return "constant";
        case FnTag::linear: return "linear";
        case FnTag::neg_proj_norm: return "neg_proj_norm";
        case FnTag::abs_norm: return "abs_norm";
        case FnTag::cosine: return "cosine";
        case FnTag::tabulated: return "tabulated";
    }
    return "?";
}

FnSpec FnSpec::zero() {
    FnSpec s;
    s.tag_ = FnTag::zero;
    return s;
}

FnSpec FnSpec::constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("constant: non-finite value");
    FnSpec s;
    s.tag_ = FnTag::constant;
    s.c_ = c;
    return s;
}

FnSpec FnSpec::linear(std::vector<double> coef) {
    if (coef.empty()) throw std::invalid_argument("linear: empty coefficients");
    double n2 = 0.0;
    for (double c : coef) {
        if (!std::isfinite(c)) throw std::invalid_argument("linear: non-finite coefficient");
        n2 += c * c;
    }
    FnSpec s;
    s.tag_ = FnTag::linear;
    s.coef_ = std::move(coef);
    s.lip_ = std::sqrt(n2);
    s.sc_ = 0.0;
    return s;
}

FnSpec FnSpec::neg_proj_norm(int k) {
    if (k < 1) throw std::invalid_argument("neg_proj_norm: k must be >= 1");
    FnSpec s;
    s.tag_ = FnTag::neg_proj_norm;
    s.k_ = k;
    s.lip_ = 1.0;
    s.sc_ = 0.0;  // concave
    return s;
}

FnSpec FnSpec::abs_norm() {
    FnSpec s;
    s.tag_ = FnTag::abs_norm;
    s.lip_ = 1.0;
    s.sc_ = std::numeric_limits<double>::infinity();
    return s;
}

FnSpec FnSpec::cosine(double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("cosine: frequency must be > 0");
    FnSpec s;
    s.tag_ = FnTag::cosine;
    s.c_ = omega;
    s.lip_ = omega;
    s.sc_ = omega * omega;
    return s;
}

FnSpec FnSpec::tabulated(ScalarField table, double lipschitz, double semiconcavity) {
    if (!(lipschitz >= 0.0)) throw std::invalid_argument("tabulated: Lipschitz constant must be >= 0");
    FnSpec s;
    s.tag_ = FnTag::tabulated;
    s.table_ = std::make_shared<const ScalarField>(std::move(table));
    s.lip_ = lipschitz;
    s.sc_ = semiconcavity;
    return s;
}

namespace {

double interp_tabulated(const ScalarField& f, std::span<const double> x) {
    const Grid& g = f.grid;
    if (static_cast<int>(x.size()) != g.dim())
        throw std::invalid_argument("tabulated: point dimension mismatch");
    const int d = g.dim();
    std::vector<int> i0(d);
    std::vector<double> w(d);
    for (int a = 0; a < d; ++a) {
        const Axis& ax = g.axis(a);
        const double s = (x[a] - ax.lo) / ax.spacing();
        if (s < -1e-9 || s > ax.n - 1 + 1e-9)
            throw std::domain_error("tabulated: point outside grid hull");
        int i = static_cast<int>(std::floor(s));
        if (i < 0) i = 0;
        if (i > ax.n - 2) i = ax.n - 2;
        i0[a] = i;
        w[a] = s - i;
    }
    double v = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
        double wt = 1.0;
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) {
            const int hi = (corner >> a) & 1;
            wt *= hi ? w[a] : 1.0 - w[a];
            flat += (i0[a] + hi) * g.stride(a);
        }
        v += wt * f.values[flat];
    }
    return v;
}

}  // namespace

double FnSpec::operator()(std::span<const double> x) const {
    switch (tag_) {
        case FnTag::zero:
            return 0.0;
        case FnTag::constant:
            return c_;
        case FnTag::linear: {
            if (x.size() != coef_.size())
                throw std::invalid_argument("linear: point dimension mismatch");
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += coef_[i] * x[i];
            return s;
        }
        case FnTag::neg_proj_norm: {
            if (static_cast<int>(x.size()) < k_)
                throw std::invalid_argument("neg_proj_norm: point dimension below k");
            double s = 0.0;
            for (int i = 0; i < k_; ++i) s += x[i] * x[i];
            return -std::sqrt(s);
        }
        case FnTag::abs_norm: {
            double s = 0.0;
            for (double xi : x) s += xi * xi;
            return std::sqrt(s);
        }
        case FnTag::cosine:
            return std::cos(c_ * x[0]);
        case FnTag::tabulated:
            return interp_tabulated(*table_, x);
    }
    throw std::logic_error("FnSpec: bad tag");
}

ProblemSpec::ProblemSpec(FnSpec g_, FnSpec f_, double T_, int d_)
    : g(std::move(g_)), f(std::move(f_)), T(T_), d(d_) {
    if (!(T > 0.0)) throw std::invalid_argument("ProblemSpec: T must be > 0");
    if (d < 1) throw std::invalid_argument("ProblemSpec: d must be >= 1");
    if (g.tag() == FnTag::neg_proj_norm && g.proj_k() > d)
        throw std::invalid_argument("ProblemSpec: neg_proj_norm needs k <= d");
    if (f.tag() == FnTag::neg_proj_norm && f.proj_k() > d)
        throw std::invalid_argument("ProblemSpec: neg_proj_norm needs k <= d");
}

double ProblemSpec::lambda() const {
    return lambda_g() + T * std::fabs(lambda_f());
}

ScalarField sample_function(const FnSpec& fn, const Grid& grid) {
    if (fn.tag() == FnTag::tabulated) {
        if (!(fn.table()->grid == grid))
            throw std::invalid_argument("sample_function: tabulated grid mismatch");
        return *fn.table();
    }
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const std::vector<double> p = grid.point(i);
        out.values[i] = fn(p);
    }
    out.check_finite();
    return out;
}

}  // namespace vvlab
