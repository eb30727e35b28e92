#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ertex {

/// One failed equation: which law broke, on which elements, at which
/// monomial, and the two disagreeing values.
struct Violation {
    std::string axiom;
    std::string subject;   // basis elements involved
    std::string location;  // monomial / multi-index
    std::string expected;
    std::string actual;
};

/// Pass/fail verdict with located counterexamples. At most `kMaxViolations`
/// are kept; the total count is still tracked.
class Report {
public:
    static constexpr std::size_t kMaxViolations = 16;

    bool pass() const { return total_ == 0; }
    std::size_t total_violations() const { return total_; }
    const std::vector<Violation>& violations() const { return violations_; }

    void add(Violation v) {
        ++total_;
        if (violations_.size() < kMaxViolations) violations_.push_back(std::move(v));
    }

    void add(std::string axiom, std::string subject, std::string location,
             std::string expected, std::string actual) {
        add(Violation{std::move(axiom), std::move(subject), std::move(location),
                      std::move(expected), std::move(actual)});
    }

    void merge(const Report& other) {
        for (const auto& v : other.violations_) {
            if (violations_.size() < kMaxViolations) violations_.push_back(v);
        }
        total_ += other.total_;
    }

    std::string to_text() const {
        if (pass()) return "pass\n";
        std::string s = "fail (" + std::to_string(total_) + " violation" +
                        (total_ == 1 ? "" : "s") + ")\n";
        for (const auto& v : violations_) {
            s += "  " + v.axiom;
            if (!v.subject.empty()) s += " on (" + v.subject + ")";
            if (!v.location.empty()) s += " at " + v.location;
            s += ": expected " + v.expected + ", got " + v.actual + "\n";
        }
        if (total_ > violations_.size())
            s += "  ... " + std::to_string(total_ - violations_.size()) + " more\n";
        return s;
    }

private:
    std::vector<Violation> violations_;
    std::size_t total_ = 0;
};

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(int line_, int column_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + msg),
          line(line_),
          column(column_) {}
};

struct DuplicateBasisId : std::runtime_error {
    explicit DuplicateBasisId(const std::string& id)
        : std::runtime_error("duplicate basis identifier: " + id) {}
};

struct UnknownIdentifier : std::runtime_error {
    explicit UnknownIdentifier(const std::string& id)
        : std::runtime_error("unknown identifier: " + id) {}
};

struct UnknownBasisId : std::runtime_error {
    explicit UnknownBasisId(const std::string& what)
        : std::runtime_error("unknown basis element: " + what) {}
};

/// A requested coefficient or restriction is an infinite sum.
struct NonSummable : std::runtime_error {
    explicit NonSummable(const std::string& what)
        : std::runtime_error("non-summable: " + what) {}
};

/// A substitution's truncation/limit hypothesis cannot be certified.
struct HypothesisViolated : std::runtime_error {
    explicit HypothesisViolated(const std::string& what)
        : std::runtime_error("hypothesis violated: " + what) {}
};

struct NilpotenceBoundExceeded : std::runtime_error {
    explicit NilpotenceBoundExceeded(const std::string& what)
        : std::runtime_error("nilpotence bound exceeded: " + what) {}
};

struct MaxOrderExceeded : std::runtime_error {
    explicit MaxOrderExceeded(const std::string& what)
        : std::runtime_error("max order exceeded: " + what) {}
};

struct NotClosed : std::runtime_error {
    explicit NotClosed(const std::string& what)
        : std::runtime_error("not closed: " + what) {}
};

struct NotApplicable : std::runtime_error {
    explicit NotApplicable(const std::string& what)
        : std::runtime_error("not applicable: " + what) {}
};

/// A construction's input failed its entry checks; carries the evidence.
struct PreconditionFailed : std::runtime_error {
    Report report;
    explicit PreconditionFailed(const std::string& what, Report r = {})
        : std::runtime_error("precondition failed: " + what), report(std::move(r)) {}
};

}  // namespace ertex
