#pragma once
// On-disk formats: laminates as JSON (atoms plus the full split tree; reading
// revalidates every split), vector fields as raw little-endian float64 with a
// JSON sidecar, and CSV time series.

#include <stdexcept>
#include <string>
#include <vector>

#include "mhdci/fields.hpp"
#include "mhdci/laminate.hpp"

namespace mhdci {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string laminateToJson(const Laminate& lam);
Laminate laminateFromJson(const std::string& text);
void writeLaminate(const std::string& path, const Laminate& lam);
Laminate readLaminate(const std::string& path);

// writes path (raw doubles, component-major x|y|z) and path + ".json"
void writeField(const std::string& path, const VecField3& F);
VecField3 readField(const std::string& path);

void writeCsv(const std::string& path, const std::vector<std::string>& columns,
              const std::vector<std::vector<double>>& rows);

}  // namespace mhdci
