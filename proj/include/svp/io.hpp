#ifndef SVP_IO_HPP
#define SVP_IO_HPP

#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "svp/dimension.hpp"
#include "svp/models.hpp"
#include "svp/potentials.hpp"
#include "svp/pressure.hpp"
#include "svp/sft.hpp"
#include "svp/transfer.hpp"

namespace svp {

// Floats are printed with 17 significant digits so values round-trip.
std::string format_double(double v);

nlohmann::json sft_to_json(const Sft& sft);
Sft sft_from_json(const nlohmann::json& j);

nlohmann::json potential_to_json(const Sft& sft, const LocallyConstantPotential& pot);
LocallyConstantPotential potential_from_json(const Sft& sft, const nlohmann::json& j);

nlohmann::json cocycle_to_json(const MatrixCocycle& c);
MatrixCocycle cocycle_from_json(const nlohmann::json& j);

// Model files carry a "type" discriminator: pl1d | toral | ifs | cocycle.
// A cocycle model may embed a "perturbation" block (directions + eps grid).
struct LoadedModel {
  ModelSystem model;
  std::optional<PerturbationFamily> perturbation;
};

LoadedModel model_from_json(const nlohmann::json& j);
LoadedModel load_model_file(const std::string& path);

nlohmann::json bracket_to_json(const DimensionBracket& b, const std::string& trace_csv_path);

// RFC 4180 CSV with header: estimator,spec,s,level,value,direction,wall_time_ms
void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace svp

#endif
