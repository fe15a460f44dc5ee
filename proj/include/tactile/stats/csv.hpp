#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "tactile/stats/tests.hpp"

namespace tactile::stats {

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// newlines and doubled quotes. The first record is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> row_lines;  // 1-based source line of each row

    // Index of a header column; ParseError naming `source` when absent.
    std::size_t column(const std::string& name, const std::string& source = "<csv>") const;
};

CsvTable parse_csv(std::istream& in, const std::string& source = "<csv>");
CsvTable read_csv(const std::filesystem::path& path);

// Wide layout: one column per group, one observation per row; empty cells
// are skipped so groups may differ in length.
std::vector<Sample> wide_samples(const CsvTable& table, const std::string& source = "<csv>");

// Long ratings layout with columns subject, texture, condition, descriptor,
// rating (any order, extra columns ignored).
struct RatingRecord {
    std::string subject;
    std::string texture;
    std::string condition;
    std::string descriptor;
    double rating = 0.0;
};

std::vector<RatingRecord> rating_records(const CsvTable& table, const std::string& source = "<csv>");

// Ratings for one descriptor as a block x condition matrix. A block is one
// (subject, texture) observation. Conditions are in first-seen order; blocks
// missing any condition are dropped and counted.
struct RatingMatrix {
    std::string descriptor;
    std::vector<std::string> conditions;
    std::vector<std::string> blocks;  // "subject|texture"
    std::vector<std::vector<double>> values;
    std::size_t dropped_blocks = 0;

    // Column j as a paired sample aligned across blocks.
    std::vector<double> condition_values(std::size_t j) const;
};

RatingMatrix pivot_ratings(const std::vector<RatingRecord>& records, const std::string& descriptor);

// Distinct descriptors in first-seen order.
std::vector<std::string> descriptors(const std::vector<RatingRecord>& records);

}  // namespace tactile::stats
