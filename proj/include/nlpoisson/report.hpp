#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "nlpoisson/analysis.hpp"
#include "nlpoisson/geometry.hpp"
#include "nlpoisson/solver.hpp"

namespace nlpoisson {

/// %.17g rendering shared by every CSV writer.
std::string format_number(double x);

/// Header `delta,h,n_interior,...,wall_seconds`, one row per delta, then the
/// `# slope:<norm>=<value>` block when with_slopes is set.
void write_report_csv(std::ostream& out, const ConvergenceReport& report, bool with_slopes = true);

/// gnuplot script: log-log error against delta with reference slopes 1 and 1/2.
void write_report_gp(std::ostream& out, const ConvergenceReport& report, const std::string& csv_name);

/// x(,y),u
void write_solution_csv(std::ostream& out, const DomainQuadrature& domain, const Vector& u);

/// s(,t),v,n_x(,n_y)
void write_flux_csv(std::ostream& out, const DomainQuadrature& domain, const Vector& v);

/// One row per node with the masses of each ladder member and a violation flag.
void write_mass_report_csv(std::ostream& out, const DomainQuadrature& domain, const KernelMassReport& report);

/// One row per (delta, mode) and `# slope:lambda<m>=<value>` comments.
void write_eigen_csv(std::ostream& out, const EigenStudy& study);

/// Opens `path` for binary writing and passes the stream to `fn`; I/O failures
/// raise Error(Io).
template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nlpoisson

#include <fstream>

#include "nlpoisson/error.hpp"

template <class Fn>
void nlpoisson::write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    fn(out);
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}
