#include "primestrings/records.hpp"

#include <sstream>

namespace primestrings {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json big_list(const std::vector<mpz_class>& values) {
  Json out = Json::array();
  for (const auto& v : values) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 63) {
      out.push_back(v.get_si());
    } else {
      out.push_back(v.get_str());
    }
  }
  return out;
}

}  // namespace

Json string_record(const StringQuery& query, const SearchResult& result, std::int64_t elapsed_ms) {
  Json j;
  j["set"] = query.spec.label();
  j["k"] = query.k;
  j["q"] = query.q;
  j["a"] = query.a;
  j["limit"] = query.limit;
  if (result.hit) {
    j["start_index"] = result.hit->start_index;
    j["primes"] = result.hit->primes;
    j["first_occurrence"] = result.hit->first_occurrence;
  } else {
    j["found"] = false;
    j["scanned_to"] = result.scanned_to;
  }
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

Json census_record(const SpecialSetSpec& spec, const ResidueCensus& census) {
  Json j;
  j["set"] = spec.label();
  j["limit"] = census.X;
  j["q"] = census.q;
  j["total"] = census.total;
  j["phi_q"] = census.phi_q;
  j["coprime_mean"] = census.coprime_mean;
  j["max_ratio"] = census.max_ratio;
  j["min_ratio"] = census.min_ratio;
  Json counts = Json::array();
  for (std::uint64_t r = 0; r < census.q; ++r) counts.push_back({{"residue", r}, {"count", census.counts[r]}});
  j["counts"] = std::move(counts);
  return j;
}

std::string census_csv(const ResidueCensus& census) {
  std::ostringstream out;
  out << "residue,count\n";
  for (std::uint64_t r = 0; r < census.q; ++r) out << r << ',' << census.counts[r] << '\n';
  return out.str();
}

Json maier_record(const MaierRun& run, const MaierRequest& request) {
  const auto& cfg = run.config;
  const auto& c = run.census;
  Json j;
  j["q"] = cfg.q;
  j["a"] = cfg.a;
  j["y"] = cfg.y;
  j["p0"] = cfg.p0;
  j["t"] = optional_number(cfg.t);
  j["z"] = cfg.z;
  j["Q"] = cfg.Q.get_str();
  j["case"] = std::string(to_string(cfg.case_tag));
  j["S"] = c.S_count;
  j["T"] = c.T_count;
  j["rows"] = c.rows_sampled;
  j["good"] = c.good;
  j["bad"] = c.bad;
  j["rows_with_bad"] = c.rows_with_bad;
  j["max_good_run"] = c.max_good_run;

  Json rows = Json::array();
  for (const auto& row : c.per_row) {
    Json r{{"r", row.r}, {"good", row.good}, {"bad", row.bad}, {"longest_good_run", row.longest_good_run}};
    if (request.census.record_primes) {
      r["good_primes"] = big_list(row.good_primes);
      r["bad_primes"] = big_list(row.bad_primes);
    }
    rows.push_back(std::move(r));
  }
  j["per_row"] = std::move(rows);

  j["set"] = request.spec.label();
  j["yz"] = run.yz;
  j["P_a"] = cfg.P_a;
  j["interval_start"] = run.interval.start.get_str();
  j["m"] = run.m.get_str();
  j["n"] = run.n.get_str();
  const mpq_class ratio = q_over_phi(cfg);
  j["Q_over_phi_Q"] = {{"exact", ratio.get_str()}, {"value", ratio.get_d()}};
  j["case_I"] = {{"max_good_run_in_rows_with_bad", c.case1_max_good_run}};
  j["case_II"] = {{"good_in_rows_without_bad", c.case2_good_in_clean_rows},
                  {"max_good_run_in_rows_without_bad", c.case2_max_good_run}};
  j["column_residue_ok"] = c.column_residue_ok;
  j["probabilistic_primality"] = c.probabilistic_primality;
  j["exceptionality"] = "unverified";
  j["model"] = {{"E", request.model.E.describe()},
                {"D", request.model.D.describe()},
                {"log_X", request.X.log_x},
                {"D_X", request.model.D_at(request.X)},
                {"F_X", request.model.F_at(request.X)}};
  j["bounds"] = {{"A_pm", optional_number(run.bounds.bound_pm)},
                 {"other", optional_number(run.bounds.bound_other)},
                 {"selected", optional_number(run.bounds.selected)},
                 {"case_I_proxy", optional_number(run.bounds.case1_proxy)},
                 {"errors", run.bounds.errors},
                 {"note", run.bounds.note}};
  if (!cfg.warnings.empty()) j["warnings"] = cfg.warnings;
  return j;
}

}  // namespace primestrings
