#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace radcorr::util {

/// Grid specification: either comma-separated explicit values
/// ("0.1,0.5,2") or "start:stop:points[:log]". An empty spec is an empty
/// grid (sweeps then emit header-only output).
inline std::vector<double> parse_range(const std::string& spec) {
    if (spec.empty()) return {};
    std::vector<std::string> parts;
    {
        std::stringstream ss(spec);
        std::string item;
        const char sep = spec.find(':') != std::string::npos ? ':' : ',';
        while (std::getline(ss, item, sep)) parts.push_back(item);
    }
    std::vector<double> out;
    if (spec.find(':') == std::string::npos) {
        for (const auto& p : parts) out.push_back(std::stod(p));
        return out;
    }
    if (parts.size() < 3 || parts.size() > 4)
        throw std::invalid_argument("parse_range: want start:stop:points[:log]");
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const long n = std::stol(parts[2]);
    const bool log_spaced = parts.size() == 4;
    if (log_spaced && parts[3] != "log")
        throw std::invalid_argument("parse_range: unknown spacing " + parts[3]);
    if (n < 1) throw std::invalid_argument("parse_range: points >= 1");
    if (n == 1) return {start};
    if (log_spaced && (!(start > 0.0) || !(stop > 0.0)))
        throw std::invalid_argument("parse_range: log spacing needs positive bounds");
    for (long i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        out.push_back(log_spaced ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                 : start + f * (stop - start));
    }
    out.back() = stop;
    return out;
}

} // namespace radcorr::util
