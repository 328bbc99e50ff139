#pragma once

#include "vvlab/grid.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace vvlab {

enum class FnTag { zero, constant, linear, neg_proj_norm, abs_norm, cosine, tabulated };

std::string to_string(FnTag tag);

/// Analytic function with attached Lipschitz / semiconcavity metadata.
///
/// Built-in tags carry exact constants: neg_proj_norm is 1-Lipschitz and
/// concave (semiconcavity 0), abs_norm is 1-Lipschitz and not semiconcave
/// (constant +inf). Tabulated data carries user-supplied constants.
class FnSpec {
public:
    static FnSpec zero();
    static FnSpec constant(double c);
    static FnSpec linear(std::vector<double> coef);
    static FnSpec neg_proj_norm(int k);
    static FnSpec abs_norm();
    static FnSpec cosine(double omega);
    static FnSpec tabulated(ScalarField table, double lipschitz, double semiconcavity);

    double operator()(std::span<const double> x) const;

    FnTag tag() const { return tag_; }
    double lipschitz() const { return lip_; }
    double semiconcavity() const { return sc_; }  // +inf when not semiconcave
    bool is_zero() const { return tag_ == FnTag::zero; }

    int proj_k() const { return k_; }
    double scalar_param() const { return c_; }
    std::span<const double> linear_coef() const { return coef_; }
    const ScalarField* table() const { return table_.get(); }

private:
    FnSpec() = default;
    FnTag tag_ = FnTag::zero;
    double c_ = 0.0;             // constant value / cosine frequency
    std::vector<double> coef_;   // linear coefficients
    int k_ = 0;                  // neg_proj_norm projection rank
    std::shared_ptr<const ScalarField> table_;
    double lip_ = 0.0;
    double sc_ = 0.0;
};

/// Terminal cost g, running cost f, horizon and dimension, with the derived
/// aggregate constants L = L_g + T L_f and lambda = lambda_g + T |lambda_f|.
struct ProblemSpec {
    FnSpec g;
    FnSpec f;
    double T;
    int d;

    ProblemSpec(FnSpec g_, FnSpec f_, double T_, int d_);

    double L_g() const { return g.lipschitz(); }
    double L_f() const { return f.lipschitz(); }
    double lambda_g() const { return g.semiconcavity(); }
    double lambda_f() const { return f.semiconcavity(); }
    double L() const { return L_g() + T * L_f(); }
    double lambda() const;
};

ScalarField sample_function(const FnSpec& fn, const Grid& grid);

}  // namespace vvlab
