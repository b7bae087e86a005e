#ifndef FUZZYEPI_FUZZY_HPP
#define FUZZYEPI_FUZZY_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace fuzzyepi {

/// Trapezoidal membership function over a real universe. Degenerate
/// breakpoints are allowed: a==b encodes a left shoulder, c==d a right one.
class MembershipFunction {
public:
    MembershipFunction(double a, double b, double c, double d);

    /// Piecewise-linear degree in [0,1]: 0 outside (a,d), 1 on [b,c],
    /// linear on the ramps. Total on all of R.
    double degree(double x) const noexcept;

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }

private:
    double a_, b_, c_, d_;
};

/// A named crisp quantity with labelled fuzzy sets over a bounded universe.
struct LinguisticVariable {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::pair<std::string, MembershipFunction>> labels; // insertion order

    const MembershipFunction* find_label(const std::string& label) const noexcept;
    double clamp(double x) const noexcept;

    /// Throws if the universe is empty, a label's support leaves the
    /// universe, or some point of the universe has degree 0 under every
    /// label (coverage, checked on a dense grid).
    void validate() const;
};

enum class Severity { Mild, Severe, Critical };

const char* severity_name(Severity s) noexcept;

struct SeverityDegrees {
    double mild = 0.0;
    double severe = 0.0;
    double critical = 0.0;
};

/// One conjunctive rule: all atoms combined by the t-norm, concluding a
/// severity label.
struct FuzzyRule {
    std::vector<std::pair<std::string, std::string>> antecedent; // (variable, label)
    Severity consequent = Severity::Mild;
};

enum class TNorm { Min, Product };
enum class SNorm { Max, ProbSum };

/// The age/BMI severity classifier: two linguistic variables plus a
/// conjunctive rule list aggregated per severity label.
class RuleBase {
public:
    RuleBase(LinguisticVariable age, LinguisticVariable bmi, std::vector<FuzzyRule> rules,
             TNorm t_norm = TNorm::Min, SNorm s_norm = SNorm::Max);

    /// Built-in variables and rules used when a scenario does not override
    /// them. Age groups young/adult/elderly over [0,120] years, BMI groups
    /// normal/overweight/obese over [10,60] kg/m^2; rules map young->mild,
    /// adult->severe, elderly->critical, obese->severe, elderly&obese->critical.
    static RuleBase defaults();

    /// Severity degrees for a (clamped) input pair. Each rule fires with the
    /// t-norm of its atom degrees; each label aggregates its rules' firing
    /// strengths with the s-norm; labels with no firing rule stay at 0.
    SeverityDegrees infer(double age, double bmi) const noexcept;

    const LinguisticVariable& age_variable() const noexcept { return age_; }
    const LinguisticVariable& bmi_variable() const noexcept { return bmi_; }
    const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
    TNorm t_norm() const noexcept { return t_norm_; }
    SNorm s_norm() const noexcept { return s_norm_; }

private:
    LinguisticVariable age_;
    LinguisticVariable bmi_;
    std::vector<FuzzyRule> rules_;
    TNorm t_norm_;
    SNorm s_norm_;
    // Atoms resolved to (variable selector, label index) at construction.
    struct ResolvedAtom {
        bool on_age;
        std::size_t label;
    };
    std::vector<std::vector<ResolvedAtom>> resolved_;
};

/// Label with the maximum degree; ties break toward the severe end
/// (critical > severe > mild).
Severity crisp_severity(const SeverityDegrees& deg) noexcept;

} // namespace fuzzyepi

#endif
