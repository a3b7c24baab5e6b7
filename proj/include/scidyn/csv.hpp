#pragma once

// CSV ingestion and the matching writers. All files are UTF-8, comma
// separated, with a header row and optional "-quoting.
//
//   contingency tables   <axis1>,<axis2>,...,count      (long format)
//   grouping trees       <axis or "category">,level1,level2,...
//   time-sliced edges    time,source,target,weight
//   presence (optional)  time,node

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scidyn/graph.hpp"
#include "scidyn/grouping.hpp"
#include "scidyn/tensor.hpp"

namespace scidyn {

struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Splits a CSV stream into records. Unquoted fields are trimmed of
/// surrounding blanks; blank lines are skipped. Throws ParseError on an
/// unterminated quote.
std::vector<CsvRecord> read_csv(std::istream& in);

/// Quotes a field when it contains a delimiter, quote, line break or
/// surrounding blanks.
std::string csv_field(const std::string& value);

/// Duplicate index tuples are summed; categories keep their order of first
/// appearance. Throws ParseError / NegativeCount (LineError).
ContingencyTensor parse_contingency_csv(std::istream& in, TensorOptions options = {});
ContingencyTensor parse_contingency_csv(const std::filesystem::path& path, TensorOptions options = {});

void write_contingency_csv(const ContingencyTensor& tensor, std::ostream& out);
void write_contingency_csv(const ContingencyTensor& tensor, const std::filesystem::path& path);

/// Each row maps a category to its group labels from coarse to fine. A first
/// header column literally named "category" leaves the tree's axis unnamed.
/// Throws ParseError / OverlapError (LineError).
GroupingTree parse_grouping(std::istream& in);
GroupingTree parse_grouping(const std::filesystem::path& path);

void write_grouping(const GroupingTree& tree, std::ostream& out);
void write_grouping(const GroupingTree& tree, const std::filesystem::path& path);

/// Node ids are sorted lexicographically; slices follow order_time_labels();
/// edges are stored source < target, sorted, with duplicates summed.
/// Throws ParseError / NonPositiveWeight / SelfLoop (LineError).
TimeSlicedGraph parse_timesliced_edges(std::istream& edges, std::istream* presence = nullptr);
TimeSlicedGraph parse_timesliced_edges(const std::filesystem::path& edges,
                                       const std::optional<std::filesystem::path>& presence = std::nullopt);

/// Writes the edge list and, when given, a presence file listing nodes that
/// have no edges in a slice.
void write_timesliced_edges(const TimeSlicedGraph& graph, std::ostream& edges, std::ostream* presence);
void write_timesliced_edges(const TimeSlicedGraph& graph, const std::filesystem::path& edges,
                            const std::optional<std::filesystem::path>& presence = std::nullopt);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

}  // namespace scidyn
