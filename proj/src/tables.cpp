#include "basin/tables.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace basin {

namespace {

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

const std::vector<long> kTableNs = {10, 100, 1000, 10000};

}  // namespace

std::string sci_from_log(double ln_complement) {
    constexpr double ln10 = 2.302585092994045684;
    const double log10c = ln_complement / ln10;
    double exponent = std::floor(log10c);
    double mantissa = std::pow(10.0, log10c - exponent);
    if (mantissa >= 9.995) {  // would round to 10.00
        mantissa /= 10.0;
        exponent += 1.0;
    }
    char buf[64];
    if (exponent < 0)
        std::snprintf(buf, sizeof(buf), "%.2fe-%02d", mantissa, static_cast<int>(-exponent));
    else
        std::snprintf(buf, sizeof(buf), "%.2fe+%02d", mantissa, static_cast<int>(exponent));
    return buf;
}

std::string near_one_display(double ln_complement) { return "1-" + sci_from_log(ln_complement); }

PosteriorTable make_table1() {
    const std::vector<double> eps_grid = {1e-4, 1e-3, 1e-2, 5e-2, 1e-1};
    PosteriorTable t;
    t.name = "table1";
    t.row_label = "n";
    t.rows = kTableNs;
    t.col_labels = {"eps=1e-4", "eps=1e-3", "eps=1e-2", "eps=5e-2", "eps=1e-1"};
    for (long n : t.rows) {
        std::vector<double> value_row, log_row;
        std::vector<std::string> disp_row, comp_row;
        for (double eps : eps_grid) {
            const double lc = static_cast<double>(n + 1) * std::log1p(-eps);
            const double value = -std::expm1(lc);
            value_row.push_back(value);
            log_row.push_back(lc);
            comp_row.push_back(sci_from_log(lc));
            disp_row.push_back(std::exp(lc) < 5e-5 ? near_one_display(lc) : format("%.4f", value));
        }
        t.value.push_back(std::move(value_row));
        t.log_complement.push_back(std::move(log_row));
        t.display.push_back(std::move(disp_row));
        t.complement_display.push_back(std::move(comp_row));
    }
    return t;
}

PosteriorTable make_table2() {
    const std::vector<double> p_grid = {1e-3, 1e-2, 1e-1, 0.5};
    PosteriorTable t;
    t.name = "table2";
    t.row_label = "n";
    t.rows = kTableNs;
    t.col_labels = {"p=1e-3", "p=1e-2", "p=1e-1", "p=0.5"};
    for (long n : t.rows) {
        std::vector<double> value_row, log_row;
        std::vector<std::string> disp_row, comp_row;
        for (double p : p_grid) {
            // W = Beta(1,1): E[S^n] = 1/(n+1)
            const double moment = 1.0 / static_cast<double>(n + 1);
            const double denom = p + (1.0 - p) * moment;
            const double value = p / denom;
            const double complement = (1.0 - p) * moment / denom;
            value_row.push_back(value);
            log_row.push_back(std::log(complement));
            comp_row.push_back(sci_from_log(std::log(complement)));
            disp_row.push_back(value < 0.1 ? format("%.4f", value) : format("%.3f", value));
        }
        t.value.push_back(std::move(value_row));
        t.log_complement.push_back(std::move(log_row));
        t.display.push_back(std::move(disp_row));
        t.complement_display.push_back(std::move(comp_row));
    }
    return t;
}

PosteriorTable make_table3() {
    const std::vector<double> alpha_grid = {0.1, 0.5, 1.0, 5.0};
    PosteriorTable t;
    t.name = "table3";
    t.row_label = "n";
    t.rows = kTableNs;
    for (double alpha : alpha_grid) t.col_labels.push_back("geometric,alpha=" + format("%g", alpha));
    for (double alpha : alpha_grid) t.col_labels.push_back("zt-poisson,alpha=" + format("%g", alpha));
    // (1 - pi1) / pi1 for geometric pi_k = 2^{-k} and zero-truncated Poisson(1)
    const double ratio_geometric = 1.0;
    const double ratio_poisson = std::exp(1.0) - 2.0;
    for (long n : t.rows) {
        std::vector<double> value_row, log_row;
        std::vector<std::string> disp_row, comp_row;
        for (double ratio : {ratio_geometric, ratio_poisson}) {
            for (double alpha : alpha_grid) {
                // upper theorem bound on 1 - P(K=1|H_n)
                const double lc = std::log(0.5 * ratio) +
                                  0.5 * alpha * (std::log1p(alpha) - std::log(static_cast<double>(n) + alpha));
                const double value = -std::expm1(lc);
                value_row.push_back(value);
                log_row.push_back(lc);
                comp_row.push_back(sci_from_log(lc));
                disp_row.push_back(std::exp(lc) < 5e-4 ? near_one_display(lc) : format("%.3f", value));
            }
        }
        t.value.push_back(std::move(value_row));
        t.log_complement.push_back(std::move(log_row));
        t.display.push_back(std::move(disp_row));
        t.complement_display.push_back(std::move(comp_row));
    }
    return t;
}

std::string table_csv(const PosteriorTable& table) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{table.row_label};
    for (const std::string& label : table.col_labels) {
        header.push_back(label);
        header.push_back(label + " complement");
    }
    cells.push_back(std::move(header));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<std::string> row{std::to_string(table.rows[r])};
        for (std::size_t c = 0; c < table.col_labels.size(); ++c) {
            row.push_back(table.display[r][c]);
            row.push_back(table.complement_display[r][c]);
        }
        cells.push_back(std::move(row));
    }
    return emit_csv(cells);
}

json table_json(const PosteriorTable& table) {
    json cells = json::array();
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < table.col_labels.size(); ++c)
            cells.push_back(json{{"n", table.rows[r]},
                                 {"column", table.col_labels[c]},
                                 {"value", table.value[r][c]},
                                 {"log_complement", table.log_complement[r][c]},
                                 {"display", table.display[r][c]}});
    return json{{"name", table.name}, {"cells", std::move(cells)}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> row;
        std::string cell;
        std::istringstream line_in(line);
        while (std::getline(line_in, cell, ',')) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.emplace_back();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_csv(const std::vector<std::vector<std::string>>& cells) {
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out += row[i];
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace basin
