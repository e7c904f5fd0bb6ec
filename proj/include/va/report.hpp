#ifndef VA_REPORT_HPP
#define VA_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

namespace va {

enum class Status { pass, fail, error, info };

std::string status_name(Status s);

struct Witness {
    std::string inputs;
    std::string monomial;
    std::string lhs;
    std::string rhs;
};

struct CheckResult {
    std::string name;
    Status status = Status::pass;
    std::string detail;
    std::optional<Witness> witness;
};

// Structured pass/fail record. A fail always carries a witness. Assembly is
// deterministic: results are kept sorted by name, then insertion order.
class CheckReport {
public:
    void pass(const std::string& name, const std::string& detail = "");
    void fail(const std::string& name, Witness w, const std::string& detail = "");
    void error(const std::string& name, const std::string& detail);
    void info(const std::string& name, const std::string& detail);
    void merge(const CheckReport& other);

    bool all_pass() const;
    std::size_t fail_count() const;
    const std::vector<CheckResult>& checks() const { return checks_; }
    const CheckResult* find(const std::string& name) const;

    std::string to_text() const;
    std::string to_json_string() const;

private:
    void add(CheckResult r);
    std::vector<CheckResult> checks_;
};

} // namespace va

#endif
