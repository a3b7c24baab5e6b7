#include "scidyn/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scidyn/error.hpp"

namespace scidyn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

double parse_real(const std::string& text, std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    // from_chars rejects a leading '+'.
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw LineError(ErrorCode::ParseError, line, "'" + text + "' in column " + column + " is not a number");
    }
    return value;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Positions of the named columns in a header; throws ParseError when one is missing.
std::vector<std::size_t> locate_columns(const CsvRecord& header, const std::vector<std::string>& names) {
    std::vector<std::size_t> positions;
    for (const auto& name : names) {
        std::size_t found = header.fields.size();
        for (std::size_t i = 0; i < header.fields.size(); ++i) {
            if (lowercase(header.fields[i]) == name) found = i;
        }
        if (found == header.fields.size()) {
            throw LineError(ErrorCode::ParseError, header.line, "missing column '" + name + "'");
        }
        positions.push_back(found);
    }
    return positions;
}

void check_width(const CsvRecord& record, std::size_t width) {
    if (record.fields.size() != width) {
        throw LineError(ErrorCode::ParseError, record.line,
                        "expected " + std::to_string(width) + " fields, got " + std::to_string(record.fields.size()));
    }
}

const std::string& non_empty(const CsvRecord& record, std::size_t column) {
    const auto& value = record.fields[column];
    if (value.empty()) {
        throw LineError(ErrorCode::ParseError, record.line, "empty field in column " + std::to_string(column + 1));
    }
    return value;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n';
}

}  // namespace

std::vector<CsvRecord> read_csv(std::istream& in) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

    std::vector<CsvRecord> records;
    CsvRecord record;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t line = 1;
    record.line = 1;

    auto end_field = [&] {
        record.fields.push_back(was_quoted ? field : trim(field));
        field.clear();
        was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = record.fields.size() == 1 && record.fields[0].empty();
        if (!blank) records.push_back(std::move(record));
        record = CsvRecord{};
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!trim(field).empty()) {
                    throw LineError(ErrorCode::ParseError, line, "quote inside an unquoted field");
                }
                field.clear();
                quoted = true;
                was_quoted = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                record.line = line;
                break;
            default:
                if (was_quoted && c != ' ' && c != '\t') {
                    throw LineError(ErrorCode::ParseError, line, "text after a closing quote");
                }
                if (!was_quoted) field += c;
        }
    }
    if (quoted) throw LineError(ErrorCode::ParseError, line, "unterminated quote");
    if (!field.empty() || was_quoted || !record.fields.empty()) end_record();
    return records;
}

std::string csv_field(const std::string& value) {
    const bool needs_quotes = value.find_first_of(",\"\r\n") != std::string::npos ||
                              (!value.empty() && (value.front() == ' ' || value.back() == ' ' ||
                                                  value.front() == '\t' || value.back() == '\t'));
    if (!needs_quotes) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_real(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

// Contingency tables

ContingencyTensor parse_contingency_csv(std::istream& in, TensorOptions options) {
    const auto records = read_csv(in);
    if (records.empty()) throw LineError(ErrorCode::ParseError, 1, "missing header row");
    const auto& header = records.front();
    if (header.fields.size() < 2 || lowercase(header.fields.back()) != "count") {
        throw LineError(ErrorCode::ParseError, header.line,
                        "header needs at least one axis column followed by 'count'");
    }
    const std::size_t rank = header.fields.size() - 1;

    std::vector<Axis> axes;
    std::vector<std::map<std::string, std::size_t>> lookup(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        if (header.fields[k].empty()) throw LineError(ErrorCode::ParseError, header.line, "empty axis name");
        axes.push_back(Axis{header.fields[k], {}});
    }

    std::vector<Cell> cells;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        check_width(record, rank + 1);
        Cell cell;
        for (std::size_t k = 0; k < rank; ++k) {
            const auto& label = non_empty(record, k);
            auto [it, inserted] = lookup[k].emplace(label, axes[k].categories.size());
            if (inserted) axes[k].categories.push_back(label);
            cell.index.push_back(it->second);
        }
        cell.value = parse_real(record.fields[rank], record.line, "count");
        if (cell.value < 0.0) {
            throw LineError(ErrorCode::NegativeCount, record.line, "count " + record.fields[rank] + " is negative");
        }
        if (!std::isfinite(cell.value)) throw LineError(ErrorCode::ParseError, record.line, "count is not finite");
        cells.push_back(std::move(cell));
    }
    if (cells.empty()) throw LineError(ErrorCode::ParseError, header.line, "table has no rows");
    return ContingencyTensor::from_cells(std::move(axes), cells, options);
}

ContingencyTensor parse_contingency_csv(const std::filesystem::path& path, TensorOptions options) {
    auto in = open_input(path);
    return parse_contingency_csv(in, options);
}

void write_contingency_csv(const ContingencyTensor& tensor, std::ostream& out) {
    std::vector<std::string> header;
    for (const auto& axis : tensor.axes()) header.push_back(axis.name);
    header.push_back("count");
    write_row(out, header);

    auto write_cell = [&](const std::vector<std::size_t>& index, double value) {
        std::vector<std::string> row;
        for (std::size_t k = 0; k < index.size(); ++k) row.push_back(tensor.axes()[k].categories[index[k]]);
        row.push_back(format_real(value));
        write_row(out, row);
    };

    if (!tensor.is_sparse()) {
        for (std::size_t i = 0; i < tensor.cell_count(); ++i) write_cell(tensor.unravel(i), tensor.at_linear(i));
        return;
    }
    // Sparse tables list only non-zero cells, preceded by zero rows that
    // introduce every category in axis order.
    std::size_t widest = 0;
    for (const auto& axis : tensor.axes()) widest = std::max(widest, axis.size());
    for (std::size_t i = 0; i < widest; ++i) {
        std::vector<std::size_t> index;
        for (const auto& axis : tensor.axes()) index.push_back(std::min(i, axis.size() - 1));
        write_cell(index, 0.0);
    }
    tensor.for_each_nonzero([&](std::size_t linear, double v) { write_cell(tensor.unravel(linear), v); });
}

void write_contingency_csv(const ContingencyTensor& tensor, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_contingency_csv(tensor, out);
    finish(out, path);
}

// Grouping trees

GroupingTree parse_grouping(std::istream& in) {
    const auto records = read_csv(in);
    if (records.empty()) throw LineError(ErrorCode::ParseError, 1, "missing header row");
    const auto& header = records.front();
    if (header.fields.size() < 2) {
        throw LineError(ErrorCode::ParseError, header.line, "header needs a category column and at least one level");
    }
    const std::size_t levels = header.fields.size() - 1;
    std::string target = header.fields[0];
    if (lowercase(target) == "category") target.clear();

    GroupNode root;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        check_width(record, levels + 1);
        const auto& category = non_empty(record, 0);
        if (!seen.insert(category).second) {
            throw LineError(ErrorCode::OverlapError, record.line, "category '" + category + "' listed twice");
        }
        GroupNode* node = &root;
        for (std::size_t level = 1; level <= levels; ++level) {
            const auto& label = non_empty(record, level);
            auto it = std::find_if(node->children.begin(), node->children.end(),
                                   [&](const GroupNode& child) { return child.label == label; });
            if (it == node->children.end()) {
                node->children.push_back(GroupNode{label, {}, {}});
                it = std::prev(node->children.end());
            }
            node = &*it;
        }
        node->categories.push_back(category);
    }
    if (root.children.empty()) throw LineError(ErrorCode::ParseError, header.line, "grouping has no rows");
    return GroupingTree(std::move(target), std::move(root));
}

GroupingTree parse_grouping(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_grouping(in);
}

void write_grouping(const GroupingTree& tree, std::ostream& out) {
    std::vector<std::string> header{tree.target_axis().empty() ? "category" : tree.target_axis()};
    for (std::size_t level = 1; level <= tree.depth(); ++level) header.push_back("level" + std::to_string(level));
    write_row(out, header);

    std::vector<std::string> path;
    auto visit = [&](auto&& self, const GroupNode& node) -> void {
        if (node.is_leaf()) {
            if (path.size() != tree.depth()) {
                throw Error(ErrorCode::InvalidArgument, "only trees with leaves at equal depth can be written");
            }
            for (const auto& category : node.categories) {
                std::vector<std::string> row{category};
                row.insert(row.end(), path.begin(), path.end());
                write_row(out, row);
            }
            return;
        }
        for (const auto& child : node.children) {
            path.push_back(child.label);
            self(self, child);
            path.pop_back();
        }
    };
    visit(visit, tree.root());
}

void write_grouping(const GroupingTree& tree, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_grouping(tree, out);
    finish(out, path);
}

// Time-sliced edge lists

TimeSlicedGraph parse_timesliced_edges(std::istream& edges, std::istream* presence) {
    struct Row {
        std::size_t line;
        std::string time;
        std::string a;
        std::string b;
        double weight;
    };
    const auto records = read_csv(edges);
    if (records.empty()) throw LineError(ErrorCode::ParseError, 1, "missing header row");
    const auto columns = locate_columns(records.front(), {"time", "source", "target", "weight"});
    const std::size_t width = records.front().fields.size();

    std::vector<Row> rows;
    std::set<std::string> ids;
    std::set<std::string> times;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        check_width(record, width);
        Row row{record.line, non_empty(record, columns[0]), non_empty(record, columns[1]),
                non_empty(record, columns[2]), parse_real(record.fields[columns[3]], record.line, "weight")};
        if (!(row.weight > 0.0) || !std::isfinite(row.weight)) {
            throw LineError(ErrorCode::NonPositiveWeight, record.line, "weight must be positive");
        }
        if (row.a == row.b) throw LineError(ErrorCode::SelfLoop, record.line, "self-loop on '" + row.a + "'");
        ids.insert(row.a);
        ids.insert(row.b);
        times.insert(row.time);
        rows.push_back(std::move(row));
    }

    std::vector<std::pair<std::string, std::string>> present_rows;
    if (presence) {
        const auto extra = read_csv(*presence);
        if (extra.empty()) throw LineError(ErrorCode::ParseError, 1, "presence file: missing header row");
        const auto pcols = locate_columns(extra.front(), {"time", "node"});
        for (std::size_t r = 1; r < extra.size(); ++r) {
            check_width(extra[r], extra.front().fields.size());
            present_rows.emplace_back(non_empty(extra[r], pcols[0]), non_empty(extra[r], pcols[1]));
            times.insert(present_rows.back().first);
            ids.insert(present_rows.back().second);
        }
    }

    std::vector<Node> nodes;
    std::map<std::string, NodeId> node_index;
    for (const auto& id : ids) {
        node_index.emplace(id, nodes.size());
        nodes.push_back(Node{id, id});
    }
    std::vector<std::string> ordered(times.begin(), times.end());
    order_time_labels(ordered);
    std::map<std::string, std::size_t> slice_index;
    for (std::size_t t = 0; t < ordered.size(); ++t) slice_index.emplace(ordered[t], t);

    std::vector<std::map<std::pair<NodeId, NodeId>, double>> weights(ordered.size());
    std::vector<std::set<NodeId>> present(ordered.size());
    for (const auto& row : rows) {
        NodeId a = node_index.at(row.a);
        NodeId b = node_index.at(row.b);
        if (b < a) std::swap(a, b);
        const std::size_t t = slice_index.at(row.time);
        weights[t][{a, b}] += row.weight;
        present[t].insert(a);
        present[t].insert(b);
    }
    for (const auto& [time, id] : present_rows) present[slice_index.at(time)].insert(node_index.at(id));

    std::vector<GraphSlice> slices;
    for (std::size_t t = 0; t < ordered.size(); ++t) {
        GraphSlice slice;
        slice.time = ordered[t];
        for (const auto& [pair, weight] : weights[t]) slice.edges.push_back(Edge{pair.first, pair.second, weight});
        slice.present.assign(present[t].begin(), present[t].end());
        slices.push_back(std::move(slice));
    }
    return TimeSlicedGraph(std::move(nodes), std::move(slices));
}

TimeSlicedGraph parse_timesliced_edges(const std::filesystem::path& edges,
                                       const std::optional<std::filesystem::path>& presence) {
    auto edge_in = open_input(edges);
    if (!presence) return parse_timesliced_edges(edge_in, nullptr);
    auto presence_in = open_input(*presence);
    return parse_timesliced_edges(edge_in, &presence_in);
}

void write_timesliced_edges(const TimeSlicedGraph& graph, std::ostream& edges, std::ostream* presence) {
    write_row(edges, {"time", "source", "target", "weight"});
    if (presence) write_row(*presence, {"time", "node"});
    for (const auto& slice : graph.slices()) {
        std::set<NodeId> touched;
        for (const auto& edge : slice.edges) {
            write_row(edges, {slice.time, graph.nodes()[edge.source].id, graph.nodes()[edge.target].id,
                              format_real(edge.weight)});
            touched.insert(edge.source);
            touched.insert(edge.target);
        }
        if (!presence) continue;
        for (NodeId node : slice.present) {
            if (!touched.contains(node)) write_row(*presence, {slice.time, graph.nodes()[node].id});
        }
    }
}

void write_timesliced_edges(const TimeSlicedGraph& graph, const std::filesystem::path& edges,
                            const std::optional<std::filesystem::path>& presence) {
    auto edge_out = open_output(edges);
    if (presence) {
        auto presence_out = open_output(*presence);
        write_timesliced_edges(graph, edge_out, &presence_out);
        finish(presence_out, *presence);
    } else {
        write_timesliced_edges(graph, edge_out, nullptr);
    }
    finish(edge_out, edges);
}

}  // namespace scidyn
