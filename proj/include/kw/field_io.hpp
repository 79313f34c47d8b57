#ifndef KW_FIELD_IO_HPP
#define KW_FIELD_IO_HPP

#include <string>

#include "kw/forms.hpp"

// Snapshot format: 16-byte header ("KWFIELD1" + u32 version + u32 reserved),
// then little-endian f64 payload in lexicographic site order with components
// innermost.  Metadata lives in a JSON sidecar `<path>.meta.json` holding
// dim, n, length, degree and the field role.  Round trips are bit exact.

namespace kw {

void write_field(const std::string &path, const AdjointForm &f,
                 const std::string &role = "form");
void write_field(const std::string &path, const Configuration &cfg);

AdjointForm read_field(const std::string &path);
Configuration read_configuration(const std::string &path);

} // namespace kw

#endif
