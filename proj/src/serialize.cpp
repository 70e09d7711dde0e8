#include "hdrelay/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace hdrelay {

namespace {

const char* model_name(ModelVariant model) {
  return model == ModelVariant::Ternary ? "ternary" : "binary";
}

nlohmann::json subset_json(const CutSet& subset) {
  nlohmann::json arr = nlohmann::json::array();
  for (int v : subset) arr.push_back(v);
  return arr;
}

}  // namespace

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

nlohmann::json to_json(const EdgeDistribution& e) {
  // Rows indexed by the upstream symbol, columns by the node's own symbol;
  // symbol order 0, 1, N.
  nlohmann::json rows = nlohmann::json::array();
  for (int prev = 0; prev < 3; ++prev) {
    nlohmann::json row = nlohmann::json::array();
    for (int s = 0; s < 3; ++s) {
      row.push_back(e.p[static_cast<size_t>(prev)][static_cast<size_t>(s)]);
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"symbols", "01N"}, {"p_prev_self", std::move(rows)}};
}

nlohmann::json to_json(const ChainDistribution& chain) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : chain.edges) edges.push_back(to_json(e));
  return nlohmann::json{{"relay_count", chain.relay_count},
                        {"edges", std::move(edges)}};
}

nlohmann::json to_json(const CapacityResult& result) {
  return nlohmann::json{{"model", model_name(result.model)},
                        {"relay_count", result.relay_count},
                        {"capacity_bits", result.capacity_bits},
                        {"cut_values", result.cut_values},
                        {"chain", to_json(result.chain)},
                        {"solver_iterations", result.solver_iterations}};
}

nlohmann::json to_json(const CutCheckReport& report) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : report.violations) {
    violations.push_back(nlohmann::json{{"chain_index", v.chain_index},
                                        {"kind", v.kind},
                                        {"subset", subset_json(v.subset)},
                                        {"lhs", v.brute_value},
                                        {"rhs", v.formula_value}});
  }
  return nlohmann::json{{"trials", report.trials},
                        {"subsets_checked", report.subsets_checked},
                        {"violations", std::move(violations)},
                        {"passed", report.passed()}};
}

nlohmann::json to_json(const TwoSourceBounds& bounds) {
  return nlohmann::json{{"r0_bound", bounds.r0_bound},
                        {"rr_bound", bounds.rr_bound},
                        {"sum_bound", bounds.sum_bound}};
}

nlohmann::json to_json(const CodebookSpec& spec) {
  return nlohmann::json{{"n", spec.n},
                        {"relay_count", spec.m},
                        {"n_counts", spec.n_counts},
                        {"model", model_name(spec.model)},
                        {"message_count", spec.message_count.get_str()},
                        {"rate_bits_per_use", spec.rate_bits_per_use()}};
}

nlohmann::json to_json(const TwoSourceCodeSpec& spec) {
  return nlohmann::json{{"n", spec.n},
                        {"n1", spec.n1},
                        {"k0", spec.k0},
                        {"w0_count", spec.w0_count.get_str()},
                        {"w1_count", spec.w1_count.get_str()},
                        {"r0_bits", spec.r0_bits()},
                        {"r1_bits", spec.r1_bits()}};
}

nlohmann::json to_json(const TransmissionReport& report) {
  nlohmann::json j{{"blocks", report.blocks},
                   {"n", report.n},
                   {"message_count", report.message_count.get_str()},
                   {"messages_sent", report.messages_sent},
                   {"messages_correct", report.messages_correct},
                   {"achieved_rate_bits_per_use",
                    report.achieved_rate_bits_per_use},
                   {"delivery_blocks", report.delivery_blocks}};
  if (report.relay_messages_sent > 0) {
    j["relay_messages_sent"] = report.relay_messages_sent;
    j["relay_messages_correct"] = report.relay_messages_correct;
    j["r0_bits"] = report.r0_bits;
    j["r1_bits"] = report.r1_bits;
  }
  if (report.trace) j["trace"] = *report.trace;
  return j;
}

void write_region_csv(std::ostream& out,
                      const std::vector<RegionCurve>& curves) {
  out << "r0_bits,r1_bits,label\n";
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      out << format_fixed6(pt.r0) << ',' << format_fixed6(pt.r1) << ','
          << curve.label << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,n_counts,rate_bits,capacity_bits,gap_bits\n";
  for (const auto& row : rows) {
    out << row.n << ',';
    for (size_t i = 0; i < row.n_counts.size(); ++i) {
      if (i > 0) out << ';';
      out << row.n_counts[i];
    }
    out << ',' << format_fixed6(row.rate_bits) << ','
        << format_fixed6(row.capacity_bits) << ','
        << format_fixed6(row.gap_bits) << '\n';
  }
}

}  // namespace hdrelay
