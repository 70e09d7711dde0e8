#pragma once

// JSON / CSV emission for results (shapes documented in the README).

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrelay/capacity.hpp"
#include "hdrelay/cutset.hpp"
#include "hdrelay/rate_region.hpp"
#include "hdrelay/simulator.hpp"

namespace hdrelay {

nlohmann::json to_json(const EdgeDistribution& e);
nlohmann::json to_json(const ChainDistribution& chain);
nlohmann::json to_json(const CapacityResult& result);
nlohmann::json to_json(const CutCheckReport& report);
nlohmann::json to_json(const TwoSourceBounds& bounds);
nlohmann::json to_json(const CodebookSpec& spec);
nlohmann::json to_json(const TwoSourceCodeSpec& spec);
nlohmann::json to_json(const TransmissionReport& report);

// CSV with header "r0_bits,r1_bits,label"; values at 6 decimal places.
void write_region_csv(std::ostream& out, const std::vector<RegionCurve>& curves);

// CSV with header "n,n_counts,rate_bits,capacity_bits,gap_bits" where
// n_counts joins the per-relay slot counts with ';'.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

std::string format_fixed6(double v);

}  // namespace hdrelay
