#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

struct BesselRow {
    int m = 0;
    double z = 0.0;
    double j = 0.0;
    double y = 0.0;
};

// Rows of fixtures/bessel_jy.csv (m,z,J_re,Y_re).
inline std::vector<BesselRow> load_bessel_fixtures() {
    const std::string path = std::string(NIC_FIXTURE_DIR) + "/bessel_jy.csv";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line != "m,z,J_re,Y_re") throw std::runtime_error("unexpected fixture header: " + line);
    std::vector<BesselRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[4];
        for (auto& s : f) std::getline(ss, s, ',');
        rows.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3])});
    }
    return rows;
}
