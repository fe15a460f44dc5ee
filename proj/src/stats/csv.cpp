#include "tactile/stats/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "tactile/error.hpp"

namespace tactile::stats {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& source, std::size_t line) {
    const std::string t = trim(text);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError(source, line, "not a finite number: '" + t + "'");
    }
    return value;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name, const std::string& source) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw ParseError(source, 1, "missing column '" + name + "'");
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> lines;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;

    auto end_field = [&] {
        record.push_back(quoted ? field : trim(field));
        field.clear();
        quoted = false;
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) {
            records.push_back(std::move(record));
            lines.push_back(record_line);
        }
        record.clear();
    };

    char c;
    bool in_quotes = false;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_record();
            ++line;
            record_line = line;
        } else {
            if (quoted && c != '\r' && c != ' ' && c != '\t') {
                throw ParseError(source, line, "unexpected character after closing quote");
            }
            if (!quoted) {
                field.push_back(c);
                if (c != ' ' && c != '\t') field_started = true;
            }
        }
    }
    if (in_quotes) throw ParseError(source, line, "unterminated quoted field");
    if (!field.empty() || !record.empty() || quoted) end_record();

    if (records.empty()) throw ParseError(source, 1, "empty CSV");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].size() != table.header.size()) {
            throw ParseError(source, lines[i],
                             "expected " + std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(records[i].size()));
        }
        table.rows.push_back(std::move(records[i]));
        table.row_lines.push_back(lines[i]);
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_csv(in, path.string());
}

std::vector<Sample> wide_samples(const CsvTable& table, const std::string& source) {
    std::vector<Sample> out(table.header.size());
    for (std::size_t j = 0; j < table.header.size(); ++j) out[j].label = table.header[j];
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (trim(table.rows[i][j]).empty()) continue;
            out[j].values.push_back(parse_number(table.rows[i][j], source, table.row_lines[i]));
        }
    }
    return out;
}

std::vector<RatingRecord> rating_records(const CsvTable& table, const std::string& source) {
    const std::size_t cs = table.column("subject", source);
    const std::size_t ct = table.column("texture", source);
    const std::size_t cc = table.column("condition", source);
    const std::size_t cd = table.column("descriptor", source);
    const std::size_t cr = table.column("rating", source);
    std::vector<RatingRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        out.push_back({row[cs], row[ct], row[cc], row[cd], parse_number(row[cr], source, table.row_lines[i])});
    }
    return out;
}

std::vector<double> RatingMatrix::condition_values(std::size_t j) const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& row : values) out.push_back(row.at(j));
    return out;
}

RatingMatrix pivot_ratings(const std::vector<RatingRecord>& records, const std::string& descriptor) {
    RatingMatrix m;
    m.descriptor = descriptor;
    std::map<std::string, std::size_t> condition_index;
    std::vector<std::string> block_order;
    std::map<std::string, std::map<std::size_t, double>> cells;
    for (const auto& r : records) {
        if (r.descriptor != descriptor) continue;
        auto [it, inserted] = condition_index.emplace(r.condition, m.conditions.size());
        if (inserted) m.conditions.push_back(r.condition);
        const std::string block = r.subject + "|" + r.texture;
        auto [bit, new_block] = cells.try_emplace(block);
        if (new_block) block_order.push_back(block);
        if (!bit->second.emplace(it->second, r.rating).second) {
            throw InvalidArgument("duplicate rating for block '" + block + "', condition '" + r.condition +
                                  "', descriptor '" + descriptor + "'");
        }
    }
    if (m.conditions.empty()) throw InvalidArgument("no ratings for descriptor '" + descriptor + "'");
    for (const auto& block : block_order) {
        const auto& row = cells[block];
        if (row.size() != m.conditions.size()) {
            ++m.dropped_blocks;
            continue;
        }
        std::vector<double> values(m.conditions.size());
        for (const auto& [j, v] : row) values[j] = v;
        m.blocks.push_back(block);
        m.values.push_back(std::move(values));
    }
    return m;
}

std::vector<std::string> descriptors(const std::vector<RatingRecord>& records) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (seen.insert(r.descriptor).second) out.push_back(r.descriptor);
    }
    return out;
}

}  // namespace tactile::stats
