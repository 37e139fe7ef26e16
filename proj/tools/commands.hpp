#pragma once

#include <optional>
#include <string>
#include <vector>

#include "output.hpp"

namespace tsc {

struct Options {
    std::string config;
    std::optional<std::string> out;
    int jobs = 1;
    Format format = Format::csv;
};

int cmd_solve(const Options& o, const std::string& curve);
int cmd_spectrum(const Options& o);
int cmd_scatlen(const Options& o, const std::string& curve);
int cmd_pseudo(const Options& o, const std::vector<double>& xi, int count);
int cmd_compare(const Options& o, const std::string& spec, const std::string& ref, const std::string& kind);
int cmd_sweep(const Options& o);

}  // namespace tsc
