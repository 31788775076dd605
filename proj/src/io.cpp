#include "svp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "svp/errors.hpp"

namespace svp {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json sft_to_json(const Sft& sft) {
  json rows = json::array();
  for (int i = 0; i < sft.k; ++i) {
    json row = json::array();
    for (int j = 0; j < sft.k; ++j) row.push_back(int(sft.transition(i, j)));
    rows.push_back(row);
  }
  return json{{"k", sft.k}, {"transitions", rows}};
}

Sft sft_from_json(const json& j) {
  if (!j.contains("transitions")) fail(ErrorCode::BadInput, "missing transitions");
  std::vector<std::vector<int>> rows = j.at("transitions").get<std::vector<std::vector<int>>>();
  Sft sft = validate_sft(rows);
  if (j.contains("k") && j.at("k").get<int>() != sft.k)
    fail(ErrorCode::BadInput, "k does not match the transition matrix");
  return sft;
}

json potential_to_json(const Sft& sft, const LocallyConstantPotential& pot) {
  std::vector<Word> words = enumerate_words(sft, pot.depth);
  json values = json::object();
  for (std::size_t i = 0; i < words.size(); ++i)
    values[word_to_string(words[i])] = pot.values[i];
  return json{{"depth", pot.depth}, {"values", values}};
}

LocallyConstantPotential potential_from_json(const Sft& sft, const json& j) {
  int depth = j.at("depth").get<int>();
  std::map<Word, double> table;
  for (const auto& [key, value] : j.at("values").items()) {
    Word w = word_from_string(key);
    if (int(w.size()) != depth) fail(ErrorCode::BadInput, "potential word length mismatch");
    table[w] = value.get<double>();
  }
  return LocallyConstantPotential::from_table(sft, table);
}

json cocycle_to_json(const MatrixCocycle& c) {
  json mats = json::array();
  for (const Mat& m : c.mats) {
    json entries = json::array();
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j) entries.push_back(m.at(i, j));
    mats.push_back(entries);
  }
  json out{{"d", c.d},
           {"orientation",
            c.orientation == MatrixCocycle::Orientation::Derivative ? "derivative"
                                                                    : "contraction"},
           {"matrices", mats}};
  if (c.blocks) out["blocks"] = c.blocks->to_index_lists();
  return out;
}

namespace {

Mat mat_from_flat(int d, const std::vector<double>& flat) {
  if (int(flat.size()) != d * d) fail(ErrorCode::BadInput, "matrix entry count mismatch");
  Mat m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.at(i, j) = flat[std::size_t(i * d + j)];
  return m;
}

}  // namespace

MatrixCocycle cocycle_from_json(const json& j) {
  int d = j.at("d").get<int>();
  std::string orient = j.value("orientation", "derivative");
  std::vector<Mat> mats;
  for (const auto& entry : j.at("matrices"))
    mats.push_back(mat_from_flat(d, entry.get<std::vector<double>>()));
  std::optional<BlockSplit> blocks;
  if (j.contains("blocks"))
    blocks = BlockSplit::from_index_lists(d, j.at("blocks").get<std::vector<std::vector<int>>>());
  auto orientation = orient == "contraction" ? MatrixCocycle::Orientation::Contraction
                                             : MatrixCocycle::Orientation::Derivative;
  if (orient != "contraction" && orient != "derivative")
    fail(ErrorCode::BadInput, "orientation must be derivative or contraction");
  return make_cocycle(std::move(mats), orientation, std::move(blocks));
}

namespace {

std::optional<std::vector<std::vector<int>>> transitions_field(const json& j) {
  if (!j.contains("transitions")) return std::nullopt;
  return j.at("transitions").get<std::vector<std::vector<int>>>();
}

}  // namespace

LoadedModel model_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  LoadedModel out;
  if (type == "pl1d") {
    PiecewiseLinearMap1D map;
    for (const auto& b : j.at("branches")) {
      PiecewiseLinearMap1D::Branch branch;
      branch.slope = b.at("slope").get<double>();
      branch.lo = b.at("domain").at(0).get<double>();
      branch.hi = b.at("domain").at(1).get<double>();
      map.branches.push_back(branch);
    }
    map.transitions = transitions_field(j);
    out.model = build_1d(map);
  } else if (type == "toral") {
    DiagonalToralSystem spec;
    spec.factors = j.at("factors").get<std::vector<int>>();
    spec.digits = j.at("digits").get<std::vector<std::vector<int>>>();
    spec.transitions = transitions_field(j);
    out.model = build_toral(spec);
  } else if (type == "ifs") {
    SelfAffineIfs spec;
    spec.d = j.at("d").get<int>();
    for (const auto& m : j.at("maps")) {
      spec.maps.push_back(mat_from_flat(spec.d, m.at("matrix").get<std::vector<double>>()));
      spec.translations.push_back(m.at("translation").get<std::vector<double>>());
    }
    spec.transitions = transitions_field(j);
    out.model = build_ifs(spec);
  } else if (type == "cocycle") {
    out.model.system.sft = sft_from_json(j.at("sft"));
    out.model.system.cocycle = cocycle_from_json(j.at("cocycle"));
    out.model.system.name = j.value("name", "cocycle");
    out.model.system.validate();
    // no geometric realization for raw cocycles
    out.model.realizer.dim = 0;
  } else {
    fail(ErrorCode::BadInput, "unknown model type '" + type + "'");
  }
  if (j.contains("perturbation")) {
    const json& p = j.at("perturbation");
    PerturbationFamily family;
    family.base = out.model.system;
    int d = family.base.cocycle.d;
    for (const auto& m : p.at("directions"))
      family.directions.push_back(mat_from_flat(d, m.get<std::vector<double>>()));
    family.eps_grid = p.at("eps_grid").get<std::vector<double>>();
    out.perturbation = family;
  }
  return out;
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadInput, "cannot open model file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::BadInput, std::string("model file parse error: ") + e.what());
  }
  return model_from_json(j);
}

json bracket_to_json(const DimensionBracket& b, const std::string& trace_csv_path) {
  json trace = json::array();
  for (const auto& t : b.trace)
    trace.push_back(json{{"estimator", t.estimator},
                         {"level", t.level},
                         {"root", t.root},
                         {"flag", t.flag}});
  return json{{"target", bracket_target_name(b.target)},
              {"lower", b.lower},
              {"upper", b.upper},
              {"lower_provenance", b.lower_provenance},
              {"upper_provenance", b.upper_provenance},
              {"flags", b.flags},
              {"trace", trace},
              {"trace_csv_path", trace_csv_path}};
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "estimator,spec,s,level,value,direction,wall_time_ms\r\n";
  for (const auto& e : trace) {
    os << e.estimator << ',' << e.spec << ',' << format_double(e.s) << ',' << e.level << ','
       << format_double(e.value) << ',' << direction_name(e.direction) << ','
       << format_double(e.wall_ms) << "\r\n";
  }
}

}  // namespace svp
