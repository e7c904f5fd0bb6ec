#include "va/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace va {

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::error: return "error";
        case Status::info: return "info";
    }
    return "?";
}

void CheckReport::add(CheckResult r) {
    auto it = std::upper_bound(checks_.begin(), checks_.end(), r,
                               [](const CheckResult& a, const CheckResult& b) {
                                   return a.name < b.name;
                               });
    checks_.insert(it, std::move(r));
}

void CheckReport::pass(const std::string& name, const std::string& detail) {
    add(CheckResult{name, Status::pass, detail, std::nullopt});
}

void CheckReport::fail(const std::string& name, Witness w, const std::string& detail) {
    add(CheckResult{name, Status::fail, detail, std::move(w)});
}

void CheckReport::error(const std::string& name, const std::string& detail) {
    add(CheckResult{name, Status::error, detail, std::nullopt});
}

void CheckReport::info(const std::string& name, const std::string& detail) {
    add(CheckResult{name, Status::info, detail, std::nullopt});
}

void CheckReport::merge(const CheckReport& other) {
    for (const auto& c : other.checks_) add(c);
}

bool CheckReport::all_pass() const {
    for (const auto& c : checks_)
        if (c.status == Status::fail || c.status == Status::error) return false;
    return true;
}

std::size_t CheckReport::fail_count() const {
    std::size_t n = 0;
    for (const auto& c : checks_)
        if (c.status == Status::fail || c.status == Status::error) ++n;
    return n;
}

const CheckResult* CheckReport::find(const std::string& name) const {
    for (const auto& c : checks_)
        if (c.name == name) return &c;
    return nullptr;
}

std::string CheckReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks_) {
        os << "[" << status_name(c.status) << "] " << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
        if (c.witness) {
            if (!c.witness->inputs.empty()) os << "    inputs:   " << c.witness->inputs << "\n";
            if (!c.witness->monomial.empty()) os << "    monomial: " << c.witness->monomial << "\n";
            os << "    lhs:      " << c.witness->lhs << "\n";
            os << "    rhs:      " << c.witness->rhs << "\n";
        }
    }
    os << (all_pass() ? "ALL CHECKS PASSED" : std::to_string(fail_count()) + " CHECK(S) FAILED")
       << " (" << checks_.size() << " recorded)\n";
    return os.str();
}

std::string CheckReport::to_json_string() const {
    nlohmann::json j;
    j["version"] = 1;
    j["checks"] = nlohmann::json::array();
    j["witnesses"] = nlohmann::json::array();
    for (const auto& c : checks_) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["status"] = status_name(c.status);
        if (!c.detail.empty()) jc["detail"] = c.detail;
        j["checks"].push_back(jc);
        if (c.witness) {
            nlohmann::json jw;
            jw["check"] = c.name;
            jw["inputs"] = c.witness->inputs;
            jw["monomial"] = c.witness->monomial;
            jw["lhs"] = c.witness->lhs;
            jw["rhs"] = c.witness->rhs;
            j["witnesses"].push_back(jw);
        }
    }
    j["all_pass"] = all_pass();
    return j.dump(2);
}

} // namespace va
