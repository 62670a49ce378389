#pragma once

#include <string>
#include <vector>

namespace ncg {

enum class Status { pass, fail, skipped };

const char* status_name(Status s);

struct CheckEntry {
    std::string id;
    Status status = Status::skipped;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct CheckReport {
    std::vector<CheckEntry> entries;

    // pass iff residual <= tol (NaN fails)
    CheckEntry& add(const std::string& id, double residual, double tol, const std::string& details = "");
    // explicit verdict, for rank/sign style checks
    CheckEntry& add_flag(const std::string& id, bool ok, double residual, double tol, const std::string& details = "");
    CheckEntry& skip(const std::string& id, const std::string& details);
    void merge(const CheckReport& other, const std::string& prefix = "");

    bool ok() const;  // no failed entries
    const CheckEntry* find(const std::string& id) const;
    bool passed(const std::string& id) const;
    double max_residual() const;
    std::string text() const;
};

}  // namespace ncg
