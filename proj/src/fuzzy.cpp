#include "fuzzyepi/fuzzy.hpp"

#include <algorithm>
#include <stdexcept>

namespace fuzzyepi {

MembershipFunction::MembershipFunction(double a, double b, double c, double d)
    : a_(a), b_(b), c_(c), d_(d) {
    if (!(a <= b && b <= c && c <= d)) {
        throw std::invalid_argument("malformed trapezoid: breakpoints must satisfy a <= b <= c <= d");
    }
}

double MembershipFunction::degree(double x) const noexcept {
    if (x <= a_ || x >= d_) {
        // Shoulders: a==b means degree 1 extends to the left edge, c==d to
        // the right edge. The plateau test below handles x inside [b,c].
        if (x >= b_ && x <= c_) return 1.0;
        return 0.0;
    }
    if (x >= b_ && x <= c_) return 1.0;
    if (x < b_) return (x - a_) / (b_ - a_);
    return (d_ - x) / (d_ - c_);
}

const MembershipFunction* LinguisticVariable::find_label(const std::string& label) const noexcept {
    for (const auto& [name_, mf] : labels) {
        if (name_ == label) return &mf;
    }
    return nullptr;
}

double LinguisticVariable::clamp(double x) const noexcept {
    return std::min(std::max(x, lo), hi);
}

void LinguisticVariable::validate() const {
    if (!(lo < hi)) {
        throw std::invalid_argument("variable '" + name + "': universe [lo, hi] must be non-empty");
    }
    if (labels.empty()) {
        throw std::invalid_argument("variable '" + name + "': needs at least one label");
    }
    for (const auto& [label, mf] : labels) {
        if (mf.a() < lo || mf.d() > hi) {
            throw std::invalid_argument("variable '" + name + "', label '" + label +
                                        "': support leaves the universe");
        }
    }
    // Coverage: every point of the universe belongs to some label.
    constexpr int kGrid = 1001;
    for (int i = 0; i < kGrid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
        bool covered = false;
        for (const auto& [label, mf] : labels) {
            if (mf.degree(x) > 0.0) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            throw std::invalid_argument("variable '" + name + "': universe not covered near x=" +
                                        std::to_string(x));
        }
    }
}

const char* severity_name(Severity s) noexcept {
    switch (s) {
    case Severity::Mild: return "mild";
    case Severity::Severe: return "severe";
    case Severity::Critical: return "critical";
    }
    return "?";
}

RuleBase::RuleBase(LinguisticVariable age, LinguisticVariable bmi, std::vector<FuzzyRule> rules,
                   TNorm t_norm, SNorm s_norm)
    : age_(std::move(age)), bmi_(std::move(bmi)), rules_(std::move(rules)), t_norm_(t_norm),
      s_norm_(s_norm) {
    age_.validate();
    bmi_.validate();
    if (rules_.empty()) throw std::invalid_argument("rule base needs at least one rule");

    bool concluded[3] = {false, false, false};
    resolved_.reserve(rules_.size());
    for (const FuzzyRule& rule : rules_) {
        if (rule.antecedent.empty()) {
            throw std::invalid_argument("rule with empty antecedent");
        }
        std::vector<ResolvedAtom> atoms;
        atoms.reserve(rule.antecedent.size());
        for (const auto& [var, label] : rule.antecedent) {
            const LinguisticVariable* lv = nullptr;
            bool on_age = false;
            if (var == age_.name) {
                lv = &age_;
                on_age = true;
            } else if (var == bmi_.name) {
                lv = &bmi_;
            } else {
                throw std::invalid_argument("rule references unknown variable '" + var + "'");
            }
            std::size_t idx = 0;
            for (; idx < lv->labels.size(); ++idx) {
                if (lv->labels[idx].first == label) break;
            }
            if (idx == lv->labels.size()) {
                throw std::invalid_argument("rule references unknown label '" + var + ":" + label +
                                            "'");
            }
            atoms.push_back({on_age, idx});
        }
        resolved_.push_back(std::move(atoms));
        concluded[static_cast<int>(rule.consequent)] = true;
    }
    if (!(concluded[0] && concluded[1] && concluded[2])) {
        throw std::invalid_argument("rule base must conclude each of mild, severe and critical");
    }
}

RuleBase RuleBase::defaults() {
    LinguisticVariable age{"age", 0.0, 120.0, {}};
    age.labels.emplace_back("young", MembershipFunction(0, 0, 25, 35));
    age.labels.emplace_back("adult", MembershipFunction(25, 35, 55, 65));
    age.labels.emplace_back("elderly", MembershipFunction(55, 65, 120, 120));

    LinguisticVariable bmi{"bmi", 10.0, 60.0, {}};
    bmi.labels.emplace_back("normal", MembershipFunction(10, 10, 23, 27));
    bmi.labels.emplace_back("overweight", MembershipFunction(23, 27, 28, 32));
    bmi.labels.emplace_back("obese", MembershipFunction(28, 32, 60, 60));

    std::vector<FuzzyRule> rules;
    rules.push_back({{{"age", "young"}}, Severity::Mild});
    rules.push_back({{{"age", "adult"}}, Severity::Severe});
    rules.push_back({{{"age", "elderly"}}, Severity::Critical});
    rules.push_back({{{"bmi", "obese"}}, Severity::Severe});
    rules.push_back({{{"age", "elderly"}, {"bmi", "obese"}}, Severity::Critical});

    return RuleBase(std::move(age), std::move(bmi), std::move(rules));
}

SeverityDegrees RuleBase::infer(double age, double bmi) const noexcept {
    const double x_age = age_.clamp(age);
    const double x_bmi = bmi_.clamp(bmi);

    double out[3] = {0.0, 0.0, 0.0};
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        double firing = 1.0;
        for (const ResolvedAtom& atom : resolved_[r]) {
            const LinguisticVariable& lv = atom.on_age ? age_ : bmi_;
            const double d = lv.labels[atom.label].second.degree(atom.on_age ? x_age : x_bmi);
            firing = (t_norm_ == TNorm::Min) ? std::min(firing, d) : firing * d;
        }
        double& acc = out[static_cast<int>(rules_[r].consequent)];
        acc = (s_norm_ == SNorm::Max) ? std::max(acc, firing) : acc + firing - acc * firing;
    }
    return {out[0], out[1], out[2]};
}

Severity crisp_severity(const SeverityDegrees& deg) noexcept {
    if (deg.critical >= deg.severe && deg.critical >= deg.mild) return Severity::Critical;
    if (deg.severe >= deg.mild) return Severity::Severe;
    return Severity::Mild;
}

} // namespace fuzzyepi
