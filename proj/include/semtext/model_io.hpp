#pragma once

#include <string>

#include "semtext/model.hpp"

namespace semtext {

// Binary model file: magic "SEMT", format version, config header, raw
// little-endian f64 parameters, CRC32 over everything past the version.
// load(save(p)) reproduces p bit for bit.
void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

constexpr uint32_t kModelFormatVersion = 1;

}  // namespace semtext
