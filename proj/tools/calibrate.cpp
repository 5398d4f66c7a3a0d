// Runs the check battery over many seeds and prints the spread of each
// statistic, used to set the thresholds in calibration.hpp.

#include <algorithm>
#include <iostream>
#include <map>
#include <vector>

#include <CLI11.hpp>

#include "robscatter/rmt_checks.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Threshold calibration for the check battery"};
    int seeds = 50;
    std::uint64_t first = 1000;
    app.add_option("--seeds", seeds, "Number of seeds")->capture_default_str();
    app.add_option("--first-seed", first, "First seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, std::vector<double>> stats;
    std::map<std::string, int> passes;
    for (int s = 0; s < seeds; ++s) {
        for (const auto& r : robscatter::run_check_battery(first + static_cast<std::uint64_t>(s))) {
            stats[r.name].push_back(r.statistic);
            passes[r.name] += r.passed ? 1 : 0;
        }
    }
    std::cout << "name,min,median,q95,max,pass_rate\n";
    for (auto& [name, v] : stats) {
        std::sort(v.begin(), v.end());
        const auto at = [&](double p) { return v[static_cast<std::size_t>(p * static_cast<double>(v.size() - 1))]; };
        std::cout << name << ',' << v.front() << ',' << at(0.5) << ',' << at(0.95) << ',' << v.back() << ','
                  << static_cast<double>(passes[name]) / static_cast<double>(v.size()) << '\n';
    }
    return 0;
}
