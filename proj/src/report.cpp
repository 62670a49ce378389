#include "ncg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ncg {

const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "skipped";
    }
}

CheckEntry& CheckReport::add(const std::string& id, double residual, double tol, const std::string& details) {
    return add_flag(id, residual <= tol, residual, tol, details);
}

CheckEntry& CheckReport::add_flag(const std::string& id, bool ok, double residual, double tol,
                                  const std::string& details) {
    entries.push_back({id, ok ? Status::pass : Status::fail, residual, tol, details});
    return entries.back();
}

CheckEntry& CheckReport::skip(const std::string& id, const std::string& details) {
    entries.push_back({id, Status::skipped, 0.0, 0.0, details});
    return entries.back();
}

void CheckReport::merge(const CheckReport& other, const std::string& prefix) {
    for (auto e : other.entries) {
        e.id = prefix + e.id;
        entries.push_back(std::move(e));
    }
}

bool CheckReport::ok() const {
    return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.status == Status::fail; });
}

const CheckEntry* CheckReport::find(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

bool CheckReport::passed(const std::string& id) const {
    const CheckEntry* e = find(id);
    return e && e->status == Status::pass;
}

double CheckReport::max_residual() const {
    double m = 0.0;
    for (const auto& e : entries)
        if (e.status != Status::skipped && std::isfinite(e.residual)) m = std::max(m, e.residual);
    return m;
}

std::string CheckReport::text() const {
    std::string out;
    char buf[96];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-8s ", status_name(e.status));
        out += buf;
        out += e.id;
        if (e.status != Status::skipped) {
            std::snprintf(buf, sizeof buf, "  residual=%.3e tol=%.1e", e.residual, e.tolerance);
            out += buf;
        }
        if (!e.details.empty()) out += "  (" + e.details + ")";
        out += '\n';
    }
    return out;
}

}  // namespace ncg
