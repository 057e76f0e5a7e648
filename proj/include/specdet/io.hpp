#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "specdet/grid.hpp"
#include "specdet/types.hpp"

namespace specdet {

// Matrix file format: {"n": int, "re": [[row-major]], "im": [[row-major]]}.
inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j;
  j["n"] = m.rows();
  auto dump = [&](auto part) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (int k = 0; k < m.cols(); ++k) row[k] = part(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["re"] = dump([](cplx v) { return v.real(); });
  j["im"] = dump([](cplx v) { return v.imag(); });
  return j;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
    throw std::invalid_argument("matrix json: row count does not match n");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(re[i].size()) != n || static_cast<int>(im[i].size()) != n)
      throw std::invalid_argument("matrix json: matrix is not square");
    for (int k = 0; k < n; ++k)
      m(i, k) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return m;
}

inline void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << matrix_to_json(m).dump(2) << "\n";
}

inline UnitaryMatrix read_matrix_file(const std::string& path, double unitary_tol = 1e-8) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  Matrix m = matrix_from_json(j);
  double res = unitarity_residual(m);
  if (res > unitary_tol)
    throw std::runtime_error("matrix in " + path + " has unitarity residual " +
                             std::to_string(res) + " > " + std::to_string(unitary_tol) +
                             " (adjust --unitary-tol if intended)");
  return UnitaryMatrix(std::move(m), unitary_tol);
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// CSV schema shared by all curve outputs:
// x_or_gamma_re,gamma_im,omega_re,omega_im,route,scheme
inline std::string curve_to_csv(const CorrelatorCurve& curve, int n) {
  std::ostringstream out;
  bool have_err = !curve.stderrs.empty();
  out << "x_or_gamma_re,gamma_im,omega_re,omega_im,route,scheme";
  if (have_err) out << ",stderr";
  out << "\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    double c1, c2;
    if (auto x = curve.grid.x_at(i)) {
      c1 = *x;
      c2 = std::imag(curve.grid.gamma_at(i, n));
    } else {
      c1 = std::real(curve.grid.gammas[i]);
      c2 = std::imag(curve.grid.gammas[i]);
    }
    out << format_g17(c1) << ',' << format_g17(c2) << ','
        << format_g17(curve.values[i].real()) << ',' << format_g17(curve.values[i].imag())
        << ',' << curve.route << ',' << (curve.scheme.empty() ? "none" : curve.scheme);
    if (have_err) out << ',' << format_g17(curve.stderrs[i]);
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json curve_to_json(const CorrelatorCurve& curve, int n) {
  nlohmann::json j;
  j["route"] = curve.route;
  j["scheme"] = curve.scheme.empty() ? "none" : curve.scheme;
  j["n"] = n;
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    nlohmann::json row;
    if (auto x = curve.grid.x_at(i)) row["x"] = *x;
    row["gamma_re"] = std::real(curve.grid.gamma_at(i, n));
    row["gamma_im"] = std::imag(curve.grid.gamma_at(i, n));
    row["omega_re"] = curve.values[i].real();
    row["omega_im"] = curve.values[i].imag();
    if (!curve.stderrs.empty()) row["stderr"] = curve.stderrs[i];
    j["points"].push_back(row);
  }
  return j;
}

// Self-contained gnuplot script plotting the given curve CSVs by relative path.
inline std::string emit_plotscript(const std::vector<std::string>& csv_files,
                                   const std::string& style) {
  if (csv_files.empty()) throw std::invalid_argument("emit_plotscript: no input files");
  std::ostringstream out;
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 'x (gamma = e^{ix/N})'\n"
      << "set ylabel 'Omega'\n"
      << "set title '" << style << "'\n";
  if (csv_files.size() == 2) {
    // overlay with ratio inset
    out << "set multiplot\n"
        << "set size 1,1\nset origin 0,0\n"
        << "plot '" << csv_files[0] << "' using 1:3 with lines title 'curve 1', \\\n"
        << "     '" << csv_files[1] << "' using 1:3 with lines title 'curve 2'\n"
        << "set size 0.35,0.3\nset origin 0.6,0.62\n"
        << "set title 'ratio'\nunset xlabel\nunset ylabel\n"
        << "plot '< paste -d, " << csv_files[0] << ' ' << csv_files[1]
        << "' using 1:($3/$10) with lines notitle\n"
        << "unset multiplot\n";
  } else {
    out << "plot";
    for (std::size_t i = 0; i < csv_files.size(); ++i)
      out << (i ? ", \\\n     " : " ") << '\'' << csv_files[i]
          << "' using 1:3 with lines title 'curve " << i + 1 << '\'';
    out << "\n";
  }
  out << "pause -1\n";
  return out.str();
}

}  // namespace specdet
