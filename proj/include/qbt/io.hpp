#ifndef QBT_IO_HPP
#define QBT_IO_HPP

#include <string>

#include "qbt/loewner.hpp"

namespace qbt {

// Model interchange: JSON object with integer fields n, m, p and row-major
// arrays A, B, C, D of decimal floats printed with 17 significant digits.
void save_model(const StateSpaceSystem& sys, const std::string& path);
StateSpaceSystem load_model(const std::string& path);

// Dataset interchange: rule arrays plus complex samples as [re, im] pairs,
// shapes declared up front.
void save_dataset(const FrequencyDataset& data, const std::string& path);
FrequencyDataset load_dataset(const std::string& path);

// Reduced model: the model format above plus a sidecar JSON holding the
// full singular-value list, the variant, and the provenance. The sidecar
// path derives from `path` by replacing the .json suffix with _sv.json.
void save_rom(const ReducedModel& rom, const std::string& path);
std::string rom_sidecar_path(const std::string& path);

std::string format_double(double value);  // %.17g

}  // namespace qbt

#endif  // QBT_IO_HPP
