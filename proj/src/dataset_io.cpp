#include "collopt/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace collopt {

std::string format_value(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

CsvRow to_csv_row(const DatasetRow& row)
{
    CsvRow c;
    c.delta_a_over_2omega = row.response.delta_a_over_2omega;
    c.rz_a_over_n = row.state_a.rz / row.n_a;
    c.rz_b_over_n = row.state_b.rz / row.n_b;
    c.chi_prime = row.response.chi_prime;
    c.chi_double_prime = row.response.chi_double_prime;
    c.dchi_prime = row.response.dchi_prime;
    c.n = row.response.n;
    c.n_g = row.response.n_g;
    c.propagating = row.response.propagating;
    return c;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows)
{
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_value(r.delta_a_over_2omega) << ',' << format_value(r.rz_a_over_n) << ','
            << format_value(r.rz_b_over_n) << ',' << format_value(r.chi_prime) << ','
            << format_value(r.chi_double_prime) << ',' << format_value(r.dchi_prime) << ','
            << format_value(r.n) << ',' << format_value(r.n_g) << ',' << (r.propagating ? 1 : 0)
            << '\n';
    }
}

void write_csv(std::ostream& out, const Dataset& data)
{
    std::vector<CsvRow> rows;
    rows.reserve(data.rows.size());
    for (const auto& r : data.rows)
        rows.push_back(to_csv_row(r));
    write_csv(out, rows);
}

std::vector<CsvRow> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("read_csv: missing or unexpected header");

    auto parse = [](const std::string& cell) {
        if (cell == "nan")
            return std::nan("");
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size())
            throw std::runtime_error("read_csv: bad number '" + cell + "'");
        return v;
    };

    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 9)
            throw std::runtime_error("read_csv: line " + std::to_string(line_no) +
                                     " has " + std::to_string(cells.size()) + " fields");
        CsvRow r;
        r.delta_a_over_2omega = parse(cells[0]);
        r.rz_a_over_n = parse(cells[1]);
        r.rz_b_over_n = parse(cells[2]);
        r.chi_prime = parse(cells[3]);
        r.chi_double_prime = parse(cells[4]);
        r.dchi_prime = parse(cells[5]);
        r.n = parse(cells[6]);
        r.n_g = parse(cells[7]);
        if (cells[8] != "0" && cells[8] != "1")
            throw std::runtime_error("read_csv: propagating must be 0 or 1");
        r.propagating = cells[8] == "1";
        rows.push_back(r);
    }
    return rows;
}

void write_report(std::ostream& out, const OracleReport& report)
{
    out << "n_atoms,omega_over_gamma,delta_over_2omega,species,analytic,oracle,abs_error,rel_error,"
           "pass\n";
    for (const auto& r : report.rows) {
        out << r.n_atoms << ',' << format_value(r.omega_over_gamma) << ','
            << format_value(r.delta_over_2omega) << ',' << to_string(r.species) << ','
            << format_value(r.analytic) << ',' << format_value(r.oracle) << ','
            << format_value(r.abs_error) << ',' << format_value(r.rel_error) << ','
            << (r.pass ? "pass" : "FAIL") << '\n';
    }
    for (const auto& t : report.trends) {
        out << "# trend N=" << t.n_atoms << " delta/(2 Omega)=" << format_value(t.delta_over_2omega)
            << " species=" << to_string(t.species) << " errors:";
        for (double e : t.abs_errors)
            out << ' ' << format_value(e);
        out << (t.decreasing ? " (decreasing with drive)" : " (not monotone)") << '\n';
    }
}

} // namespace collopt
