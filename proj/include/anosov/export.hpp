#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "anosov/anosov.hpp"
#include "anosov/curvature.hpp"
#include "anosov/jacobi.hpp"
#include "anosov/riccati.hpp"

namespace anosov {

using Json = nlohmann::ordered_json;

/// Shortest round-trip form ("%.17g"); "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

/// Comma separated, header row, LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    void add_row(const std::vector<std::string>& cells);
    std::string str() const;

private:
    std::size_t columns_;
    std::string text_;
};

Json to_json(const Interval& iv);
Json to_json(const SlopeSequence& seq);
Json to_json(const StableData& stable);
Json to_json(const ConjugateReport& report);
Json to_json(const BoundReport& report);
Json to_json(const GrowthReport& report);
Json to_json(const RateEstimate& rate);
Json to_json(const AnosovReport& report);

/// s, a, a', d, d', dbar, dbar' on a uniform grid over the window.
CsvTable jacobi_table(const ScalarSolution& a, const StableData& stable, Interval window, double step);
/// s, u, envelope for u = a'/a and the k coth(ks) envelope.
CsvTable riccati_table(const RiccatiSolution& u, double k, Interval interval, double step);
CsvTable trace_table(const GeodesicTrace& trace);
CsvTable phi_table(const std::vector<PhiSample>& samples);
/// geodesic_id, gap, min_kappa, bounded, parallel, verdict.
CsvTable geodesic_table(const AnosovReport& report);

}  // namespace anosov
