#pragma once

#include <filesystem>
#include <string>

#include "radiomic/core/tensor_io.hpp"
#include "radiomic/core/types.hpp"
#include "radiomic/sim/scene_json.hpp"

namespace radiomic::sim {

inline constexpr int kCirSchemaVersion = 1;

// CIR as an RSPG complex64 tensor [rx x bin x time]. The radar parameters
// travel in the metadata so the series can be rebuilt without the scene.
inline TensorFile cir_to_tensor(const CirFrameSeries& cir, nlohmann::json extra = nlohmann::json::object()) {
  ComplexTensor t({cir.num_receivers(), cir.num_range_bins(), cir.num_samples()});
  for (std::size_t i = 0; i < cir.data().size(); ++i) t.data[i] = std::complex<float>(cir.data()[i]);
  extra["kind"] = "cir";
  extra["schema_version"] = kCirSchemaVersion;
  extra["layout"] = "rx x bin x time";
  extra["radar"] = radar_to_json(cir.params());
  return {std::move(t), std::move(extra)};
}

inline CirFrameSeries cir_from_tensor(const TensorFile& file) {
  const auto* t = std::get_if<ComplexTensor>(&file.tensor);
  if (t == nullptr) throw FormatError("CIR file must hold a complex64 tensor");
  if (t->dims.size() != 3) throw FormatError("CIR tensor must have 3 dimensions [rx x bin x time]");
  if (file.metadata.value("kind", std::string("cir")) != "cir") throw FormatError("RSPG file is not a CIR");
  RadarParams radar;
  try {
    if (file.metadata.contains("radar")) radar = radar_from_json(file.metadata["radar"]);
  } catch (const ParameterError& e) {
    throw FormatError(std::string("CIR radar metadata: ") + e.what());
  }
  radar.num_receivers = t->dims[0];
  radar.num_range_bins = t->dims[1];
  if (radar.num_receivers == 0 || radar.num_range_bins == 0 || t->dims[2] == 0) throw FormatError("CIR tensor is empty");
  CirFrameSeries cir(radar, t->dims[2]);
  for (std::size_t i = 0; i < t->data.size(); ++i) cir.data()[i] = cplx(t->data[i]);
  return cir;
}

inline void save_cir(const CirFrameSeries& cir, const std::filesystem::path& path, nlohmann::json extra = nlohmann::json::object()) {
  save_tensor(cir_to_tensor(cir, std::move(extra)), path);
}

inline CirFrameSeries load_cir(const std::filesystem::path& path) { return cir_from_tensor(load_tensor(path)); }

}  // namespace radiomic::sim
