#pragma once

#include <string>

#include "json.hpp"
#include "pmelab/abp.hpp"
#include "pmelab/dyadic.hpp"
#include "pmelab/oscillation.hpp"
#include "pmelab/paraboloid.hpp"

namespace pmelab {

// One time slice as CSV rows `t,x1[,x2],u` with %.17g formatting (lossless
// double round-trip).
void write_slice_csv(const std::string& path, const GridFunction& u, int k);

// Inverse of write_slice_csv: parses a single-slice CSV, infers the uniform
// lattice (dim, origin, h, node counts) and the common time, and returns a
// one-slice GridFunction. Throws on ragged lattices, mixed times, or
// non-uniform spacing.
GridFunction read_slice_csv(const std::string& path);

// Contact entries as CSV rows `yx1[,yx2],ys,cx1[,cx2],ct,u_at_contact`.
void write_contact_csv(const std::string& path, const ContactSet& contacts,
                       int dim);

nlohmann::ordered_json to_json(const ContactEntry& entry, int dim);
nlohmann::ordered_json to_json(const AbpReport& report, int dim);
nlohmann::ordered_json to_json(const LocalizationReport& report, int dim);
nlohmann::ordered_json to_json(const SelectionResult& result, int dim);
nlohmann::ordered_json to_json(const FixedTimeReport& report, int dim);
nlohmann::ordered_json to_json(const IntegrateReport& report);
nlohmann::ordered_json to_json(const ImprovementReport& report);
nlohmann::ordered_json to_json(const HoelderReport& report, int dim);

// Serialize with a stable key order, two-space indent and trailing newline;
// output is byte-deterministic (no timestamps, no environment state).
void write_json(const std::string& path, const nlohmann::ordered_json& doc);

}  // namespace pmelab
