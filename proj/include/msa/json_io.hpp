#ifndef MSA_JSON_IO_HPP
#define MSA_JSON_IO_HPP

// Report serialization. Output is canonical: keys in insertion order, two-space
// indentation, floating-point values at 17 significant digits and non-finite
// values as null, so equal reports give equal bytes.

#include "json.hpp"
#include <string>
#include <vector>

#include "msa/descent.hpp"
#include "msa/disorder.hpp"
#include "msa/green.hpp"
#include "msa/harness.hpp"
#include "msa/lattice.hpp"

namespace msa {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

std::string canonical_dump(const Json& j);

/// %.17g, or "null" for NaN and infinities.
std::string format_double(double v);

Json to_json(const LatticePoint& x);
Json to_json(const Box& b);
Json to_json(const MarginalDistribution& dist);
Json to_json(const Interval& ci);
Json to_json(const Classification& c);
Json to_json(const ScaleReport& r);
Json to_json(const WegnerReport& r);
Json to_json(const InductionReport& r);
Json to_json(const MpEventReport& r, bool with_log);
Json to_json(const TensorCheck& t);
Json to_json(const GriResult& g);
Json to_json(const DescentCheck& c);
Json to_json(const NsVerdict& v);

const char* to_string(DescentCase kind);

/// Header L,E,m,trials,singular,resonant,p_hat,ci_lo,ci_hi,bound,pass and one
/// row per report.
std::string scale_csv(const std::vector<ScaleReport>& reports);

}  // namespace msa

#endif  // MSA_JSON_IO_HPP
