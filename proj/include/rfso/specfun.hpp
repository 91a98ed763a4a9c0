#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

/// Special-function kernel: gamma and error-function families, the two
/// Bessel functions the channel models need, and a Meijer-G evaluator for
/// real positive arguments.
///
/// Every function here is pure and may be called concurrently.
namespace rfso::specfun {

/// Argument outside the function's domain (e.g. a pole of the gamma function).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An iterative evaluation did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Gamma family
// ---------------------------------------------------------------------------

/// Γ(x). Throws DomainError at 0, -1, -2, ... and OverflowError when the
/// magnitude exceeds the double range.
double gamma(double x);

/// ln|Γ(x)|. Throws DomainError at the poles.
double log_gamma(double x);

/// Sign of Γ(x) (+1 or -1); x must not be a pole.
int gamma_sign(double x);

/// 1/Γ(x), which is entire: returns exactly 0 at the poles of Γ.
double reciprocal_gamma(double x);

/// Principal-branch-agnostic ln Γ(z) for complex z. The imaginary part is
/// only meaningful modulo 2π; callers exponentiate.
std::complex<double> log_gamma(std::complex<double> z);

/// Upper incomplete gamma Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt.
///
/// Any real s is accepted. For s > 0, x = 0 gives Γ(s); for s <= 0 the
/// integral diverges at 0 and x must be strictly positive.
double upper_incomplete_gamma(double s, double x);

/// Regularised Q(s, x) = Γ(s, x) / Γ(s) for s > 0, x >= 0.
double regularized_upper_gamma(double s, double x);

// ---------------------------------------------------------------------------
// Error functions and Bessel functions
// ---------------------------------------------------------------------------

double erf(double x);
double erfc(double x);

/// J0(x), Bessel function of the first kind of order zero.
double bessel_j0(double x);

/// I0(x), modified Bessel function of the first kind of order zero.
/// Throws OverflowError for |x| > 700.
double bessel_i0(double x);

// ---------------------------------------------------------------------------
// Meijer G
// ---------------------------------------------------------------------------

/// Orders and parameters of G^{m,n}_{p,q}(z | a; b), with p = a.size() and
/// q = b.size(). The first n entries of `a` and the first m entries of `b`
/// sit in the numerator of the Mellin-Barnes kernel.
struct MeijerGSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> a;
  std::vector<double> b;

  std::size_t p() const { return a.size(); }
  std::size_t q() const { return b.size(); }

  /// Throws DomainError unless m <= q, n <= p, n <= 1, p < q, every
  /// parameter is finite, and the vertical contour converges.
  void validate() const;
};

enum class MeijerGMethod {
  automatic,  ///< residue series, falling back to the contour integral
  residue,    ///< residue series only (throws when it cannot be trusted)
  contour,    ///< Mellin-Barnes integral along a vertical line
};

enum class MeijerGPath { residue, contour };

struct MeijerGOptions {
  MeijerGMethod method = MeijerGMethod::automatic;
  /// Subtract the z^0 term of the small-z expansion from the result. Used
  /// to evaluate G - G(0+) without cancellation when G is nearly constant.
  bool drop_constant_term = false;
  /// Lower parameters closer than this (modulo integers) are treated as
  /// coincident, which forces the contour path.
  double coincidence_tol = 1e-6;
  /// Per-ladder term cap for the residue series.
  std::size_t max_terms = 10000;
  /// Relative tolerance for the contour quadrature.
  double contour_rel_tol = 1e-13;
};

struct MeijerGEvaluation {
  double value = 0.0;
  MeijerGPath path = MeijerGPath::residue;
  /// Set when near-coincident lower parameters forced the contour path.
  bool near_coincident = false;
  /// Residue terms summed, or quadrature nodes used.
  std::size_t work = 0;
};

/// Evaluates G^{m,n}_{p,q}(z) for z > 0 and reports the strategy used.
MeijerGEvaluation evaluate_meijer_g(const MeijerGSpec& spec, double z,
                                    const MeijerGOptions& opts = {});

/// Value of G^{m,n}_{p,q}(z) for z > 0.
double meijer_g(const MeijerGSpec& spec, double z,
                const MeijerGOptions& opts = {});

/// Residue series over the poles of the numerator lower gammas. Throws
/// DomainError on coincident poles and ConvergenceError when the series
/// does not settle or loses too many digits to cancellation.
MeijerGEvaluation meijer_g_residue(const MeijerGSpec& spec, double z,
                                   const MeijerGOptions& opts = {});

/// Mellin-Barnes integral along Re(s) = c with c placed at the saddle of
/// the kernel, integrated with an exp-sinh rule.
MeijerGEvaluation meijer_g_contour(const MeijerGSpec& spec, double z,
                                   const MeijerGOptions& opts = {});

/// One term c·z^e of the small-z residue expansion.
struct ExpansionTerm {
  double exponent = 0.0;
  double coefficient = 0.0;
  double ladder = 0.0;    ///< lower parameter b_h generating the ladder
  std::size_t order = 0;  ///< position k along the ladder, exponent = b_h + k
};

struct Expansion {
  std::vector<ExpansionTerm> terms;
  /// Ladders dropped because their pole coincides with another ladder.
  bool skipped_coincident = false;
};

/// The first `orders` terms of each pole ladder of the small-z expansion,
/// with identically vanishing ladders removed. Ladders whose poles coincide
/// (modulo integers) with another ladder are skipped and flagged.
Expansion meijer_g_expansion(const MeijerGSpec& spec, std::size_t orders,
                             double coincidence_tol = 1e-6);

/// Δ(j : x) = x/j, (x+1)/j, ..., (x+j-1)/j.
std::vector<double> gap_sequence(unsigned j, double x);

}  // namespace rfso::specfun
