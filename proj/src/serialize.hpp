#ifndef QTB_SERIALIZE_HPP
#define QTB_SERIALIZE_HPP

#include <json.hpp>

#include "apps.hpp"
#include "calderon.hpp"
#include "tauber.hpp"

namespace qtb {

using json = nlohmann::ordered_json;

json cplx_to_json(const cplx& z);
cplx cplx_from_json(const json& j);
json cvec_to_json(const CVec& v);

json field_to_json(const FieldSpec& f);
FieldSpec field_from_json(const json& j);

json field_sum_to_json(const Field& f);
// Accepts a catalog name, a single spec object, or {"sum": [...]}.
Field field_sum_from_json(const json& j);

struct GridConfig {
  Site site = Site::Infinity;
  double lambda0 = 1.0;
  double ratio = 1.1892071150027210667;
  int count = 64;
  int n_theta = 16;
  int n_phi = 8;
};
GridConfig grid_config_from_json(const json& j, int dim);
json grid_config_to_json(const GridConfig& g);
ScaleGrid build_grid(const GridConfig& g, int dim);

json slow_vary_to_json(const SlowVarySpec& s);
json scaling_report_to_json(const ScalingReport& rep, const ScaleGrid& grid);
json calderon_report_to_json(const CalderonVerifyReport& rep);
json littlewood_report_to_json(const LittlewoodReport& rep);

// Two-column CSV "n,c_re[,c_im]" -> series.
ConeSeries series_from_csv(const std::string& csv);

}  // namespace qtb

#endif
