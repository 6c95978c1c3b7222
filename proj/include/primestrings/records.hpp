// Machine-readable records emitted by the CLI (key order is part of the format).
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "primestrings/maier_lab.hpp"
#include "primestrings/string_search.hpp"

namespace primestrings {

using Json = nlohmann::ordered_json;

// {"set","k","q","a","limit","start_index","primes","first_occurrence","elapsed_ms"}
// or, when nothing was found, {"set","k","q","a","limit","found":false,"scanned_to","elapsed_ms"}.
Json string_record(const StringQuery& query, const SearchResult& result, std::int64_t elapsed_ms);

Json census_record(const SpecialSetSpec& spec, const ResidueCensus& census);

// "residue,count" header then one row per residue 0..q-1.
std::string census_csv(const ResidueCensus& census);

// Census JSON for a Maier run; Q is always a decimal string.
Json maier_record(const MaierRun& run, const MaierRequest& request);

}  // namespace primestrings
