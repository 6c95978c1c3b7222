#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "primestrings/error.hpp"
#include "primestrings/maier_lab.hpp"
#include "primestrings/records.hpp"
#include "primestrings/special_sets.hpp"
#include "primestrings/string_search.hpp"

namespace py = pybind11;
using namespace primestrings;

namespace {

py::int_ to_py(const mpz_class& v) { return py::int_(py::str(v.get_str())); }

PrimeTable table_below(std::uint64_t hi, unsigned workers) {
  return PrimeTable::build(std::max<std::uint64_t>(hi, 2), {.workers = workers});
}

StringQuery make_query(const std::string& set, std::uint64_t k, std::uint64_t q, std::uint64_t a,
                       std::uint64_t limit) {
  StringQuery query;
  query.spec = SpecialSetSpec::parse(set);
  query.k = k;
  query.q = q;
  query.a = a;
  query.limit = limit;
  query.validate();
  return query;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Strings of consecutive special primes in residue classes; Maier-matrix experiments.";

  py::register_exception<Error>(m, "PrimestringsError", PyExc_ValueError);

  m.def("is_prime", py::overload_cast<std::uint64_t>(&is_prime), py::arg("n"));
  m.def(
      "sieve_range",
      [](std::uint64_t lo, std::uint64_t hi, unsigned workers) {
        py::gil_scoped_release release;
        return sieve_range(lo, hi, {.workers = workers});
      },
      py::arg("lo"), py::arg("hi"), py::arg("workers") = 1, "Primes in [lo, hi).");
  m.def(
      "count_primes_ap",
      [](std::uint64_t X, std::uint64_t q) {
        py::gil_scoped_release release;
        return count_primes_ap(X, q).counts;
      },
      py::arg("X"), py::arg("q"), "Per-residue counts of primes p <= X.");

  m.def(
      "special_primes",
      [](const std::string& set, std::uint64_t lo, std::uint64_t hi) {
        const auto spec = SpecialSetSpec::parse(set);
        py::gil_scoped_release release;
        return special_primes(spec, lo, hi, table_below(hi, 1));
      },
      py::arg("set"), py::arg("lo"), py::arg("hi"));
  m.def(
      "enumerate_special",
      [](const std::string& set, std::uint64_t lo, std::uint64_t hi) {
        return enumerate_special(SpecialSetSpec::parse(set), lo, hi);
      },
      py::arg("set"), py::arg("lo"), py::arg("hi"));
  m.def(
      "beatty_member",
      [](const std::string& constant, std::uint64_t value) {
        return beatty_member(IrrationalConstant::named(constant), value);
      },
      py::arg("constant"), py::arg("m"));

  m.def(
      "find_first_string_json",
      [](const std::string& set, std::uint64_t k, std::uint64_t q, std::uint64_t a, std::uint64_t limit,
         unsigned workers) {
        const auto query = make_query(set, k, q, a, limit);
        py::gil_scoped_release release;
        const auto result = find_first_string(query, table_below(limit, workers), {workers, kDefaultSegmentSpan, {}});
        return string_record(query, result, 0).dump();
      },
      py::arg("set"), py::arg("k"), py::arg("q"), py::arg("a"), py::arg("limit"), py::arg("workers") = 1);
  m.def(
      "scan_all_strings",
      [](const std::string& set, std::uint64_t q, std::uint64_t a, std::uint64_t limit, unsigned workers) {
        const auto query = make_query(set, 1, q, a, limit);
        py::gil_scoped_release release;
        std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> out;
        for (const auto& run : scan_all_strings(query, table_below(limit, workers), {workers, kDefaultSegmentSpan, {}})) {
          out.emplace_back(run.start, run.length, run.start_index);
        }
        return out;
      },
      py::arg("set"), py::arg("q"), py::arg("a"), py::arg("limit"), py::arg("workers") = 1,
      "Maximal runs (start, length, start_index) below limit.");
  m.def(
      "residue_census",
      [](const std::string& set, std::uint64_t X, std::uint64_t q) {
        const auto spec = SpecialSetSpec::parse(set);
        py::gil_scoped_release release;
        return residue_census(spec, X, q, table_below(X + 1, 1)).counts;
      },
      py::arg("set"), py::arg("X"), py::arg("q"));

  m.def("count_S_q", &count_S_q, py::arg("q"), py::arg("z"));
  m.def("count_psi", &count_psi, py::arg("x"), py::arg("t"));
  m.def(
      "classify_residue", [](std::uint64_t a, std::uint64_t q) { return std::string(to_string(classify_residue(a, q))); },
      py::arg("a"), py::arg("q"));
  m.def(
      "build_Q",
      [](std::uint64_t q, std::uint64_t a, std::uint64_t y, std::uint64_t p0) {
        MaierParams params;
        params.y = y;
        params.p0 = p0;
        params.t = threshold_t(y);
        const auto cfg = build_Q(q, a, params);
        py::dict out;
        out["Q"] = to_py(cfg.Q);
        out["P_a"] = cfg.P_a;
        out["case"] = std::string(to_string(cfg.case_tag));
        return out;
      },
      py::arg("q"), py::arg("a"), py::arg("y"), py::arg("p0"));
  m.def(
      "crt_anchor",
      [](std::uint64_t q, std::uint64_t a, std::vector<std::uint64_t> primes, bool plus) {
        return to_py(crt_anchor(make_config(q, a, std::move(primes)), plus ? AnchorSign::plus : AnchorSign::minus));
      },
      py::arg("q"), py::arg("a"), py::arg("primes"), py::arg("plus") = true);
  m.def(
      "maier_json",
      [](std::uint64_t q, std::uint64_t a, std::optional<std::uint64_t> y, std::optional<std::uint64_t> p0,
         std::optional<std::uint64_t> yz, std::uint64_t rows, const std::string& set, double X, double D,
         bool record_primes, unsigned workers) {
        MaierRequest request;
        request.q = q;
        request.a = a;
        request.y = y;
        request.p0 = p0;
        request.yz = yz;
        request.rows = rows;
        request.spec = SpecialSetSpec::parse(set);
        request.X = ScaleX::from_value(X);
        request.model.D = DModel{DModel::Kind::constant, D};
        request.census = {workers, record_primes};
        py::gil_scoped_release release;
        const auto run = run_maier(request, PrimeTable::build(std::uint64_t{1} << 22, {.workers = workers}));
        return maier_record(run, request).dump();
      },
      py::arg("q"), py::arg("a"), py::arg("y") = py::none(), py::arg("p0") = py::none(), py::arg("yz") = py::none(),
      py::arg("rows") = 1000, py::arg("set") = "all", py::arg("X") = 1e12, py::arg("D") = 2.0,
      py::arg("record_primes") = false, py::arg("workers") = 1);

  m.def(
      "validate_g",
      [](const std::string& family, const std::vector<double>& grid) {
        const auto spec = SpecialSetSpec::parse("floorprod:" + family);
        const auto report = validate_g(std::get<FloorProduct>(spec.variant()).g, grid);
        py::dict out;
        out["family"] = report.family;
        out["alpha_g_samples"] = report.relative_to_g.samples;
        out["alpha_g_limit"] = report.relative_to_g.limit.value;
        out["alpha_f_limit"] = report.relative_to_f.limit.value;
        out["increasing_unbounded"] = report.increasing_unbounded;
        out["convexity"] = report.convexity;
        out["log_growth"] = report.log_growth;
        return out;
      },
      py::arg("family"), py::arg("grid"));
  m.def(
      "string_bound_pm",
      [](double loglog_x, double log_max_DF, std::uint64_t phi_q) {
        return string_bound_pm(LogScales{loglog_x, std::log(loglog_x), std::log(std::log(loglog_x))}, log_max_DF,
                               phi_q);
      },
      py::arg("loglog_x"), py::arg("log_max_DF"), py::arg("phi_q"));
  m.def("case1_proxy", &case1_proxy, py::arg("log_y_or_t"), py::arg("log_z"), py::arg("phi_q"));
}
