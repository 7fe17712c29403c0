#pragma once

#include "dnabrick/project.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dnabrick {

inline constexpr std::string_view kProjectFormatTag = "3dna-project";
inline constexpr int kProjectFormatVersion = 1;

inline constexpr std::string_view kCsvHeader =
    "strand_id,kind,orientation,length_nt,domains,sequence";

/// Canonical JSON text of a project (.3dna). Keys are sorted and the text
/// ends with a newline, so equal projects serialize to equal bytes. When
/// `cached` is given its plus-side domains are embedded with a checksum.
std::string export_project(const Project& project,
                           const DomainAssignment* cached = nullptr);

/// Parses and validates a .3dna document. Sequences are always regenerated
/// from the stored seed; an embedded cache is only checked for integrity.
Project import_project(std::string_view bytes);

std::string export_csv(const std::vector<Strand>& strands);
std::string export_latex(const std::vector<Strand>& strands);

/// Plain-text summary plus strand table, used where a printable sheet is
/// wanted.
std::string export_report(const Project& project, const Design& design);

enum class ExportFormat { csv, tex, project, report };

ExportFormat parse_export_format(std::string_view name);
const char* file_extension(ExportFormat format);
const char* mime_type(ExportFormat format);

/// Renders any export format for a project; shared by the CLI and the
/// service so both emit identical bytes.
std::string render_export(const Project& project, ExportFormat format,
                          const DomainAssignment* assignment = nullptr);

/// FNV-1a 64-bit digest, hex encoded; used for the sequence cache.
std::string checksum_hex(std::string_view data);

} // namespace dnabrick
