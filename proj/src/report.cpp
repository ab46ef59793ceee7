#include "nlpoisson/report.hpp"

#include <cstdio>

namespace nlpoisson {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report, bool with_slopes) {
    out << "delta,h,n_interior,n_boundary,l2_interior,h1_interior,l2_flux,nonlocal_energy,iterations,wall_seconds\n";
    for (const auto& r : report.rows) {
        out << format_number(r.delta) << ',' << format_number(r.h) << ',' << r.n_interior << ','
            << r.n_boundary << ',' << format_number(r.errors.l2_interior) << ','
            << format_number(r.errors.h1_interior) << ',' << format_number(r.errors.l2_flux) << ','
            << format_number(r.errors.nonlocal_energy) << ',' << r.iterations << ','
            << format_number(r.wall_seconds) << '\n';
    }
    if (!with_slopes) return;
    const std::pair<const char*, const SlopeFit*> fits[] = {
        {"l2_interior", &report.l2_interior},
        {"h1_interior", &report.h1_interior},
        {"l2_flux", &report.l2_flux},
        {"nonlocal_energy", &report.nonlocal_energy},
    };
    for (const auto& [name, fit] : fits) {
        out << "# slope:" << name << '=' << format_number(fit->slope) << '\n';
    }
    for (const auto& [name, fit] : fits) {
        out << "# fit_residual:" << name << '=' << format_number(fit->residual) << '\n';
    }
}

void write_report_gp(std::ostream& out, const ConvergenceReport& report, const std::string& csv_name) {
    double anchor_delta = 1.0, anchor_error = 1.0;
    if (!report.rows.empty()) {
        anchor_delta = report.rows.front().delta;
        anchor_error = report.rows.front().errors.h1_interior;
    }
    out << "# gnuplot script for " << csv_name << "\n";
    out << "set datafile separator ','\n";
    out << "set datafile commentschars '#'\n";
    out << "set key autotitle columnhead\n";
    out << "set logscale xy\n";
    out << "set xlabel 'delta'\n";
    out << "set ylabel 'error'\n";
    out << "set title '" << report.problem << " (" << report.kernel << " kernel)'\n";
    out << "set terminal pngcairo size 900,650\n";
    out << "set output 'report.png'\n";
    out << "d0 = " << format_number(anchor_delta) << "\n";
    out << "e0 = " << format_number(anchor_error) << "\n";
    out << "plot '" << csv_name << "' using 1:5 with linespoints title 'L2', \\\n";
    out << "     '' using 1:6 with linespoints title 'H1', \\\n";
    out << "     '' using 1:7 with linespoints title 'flux L2', \\\n";
    out << "     '' using 1:8 with linespoints title 'nonlocal energy', \\\n";
    out << "     e0*(x/d0) with lines dashtype 2 title 'slope 1', \\\n";
    out << "     e0*(x/d0)**0.5 with lines dashtype 3 title 'slope 1/2'\n";
}

void write_solution_csv(std::ostream& out, const DomainQuadrature& domain, const Vector& u) {
    out << (domain.dimension == 1 ? "x,u\n" : "x,y,u\n");
    for (std::size_t i = 0; i < domain.n_interior(); ++i) {
        const Point& x = domain.interior_nodes[i];
        out << format_number(x[0]) << ',';
        if (domain.dimension > 1) out << format_number(x[1]) << ',';
        out << format_number(u[static_cast<Eigen::Index>(i)]) << '\n';
    }
}

void write_flux_csv(std::ostream& out, const DomainQuadrature& domain, const Vector& v) {
    out << (domain.dimension == 1 ? "s,v,n_x\n" : "s,t,v,n_x,n_y\n");
    for (std::size_t j = 0; j < domain.n_boundary(); ++j) {
        const Point& s = domain.boundary_nodes[j];
        const Point& n = domain.boundary_normals[j];
        out << format_number(s[0]) << ',';
        if (domain.dimension > 1) out << format_number(s[1]) << ',';
        out << format_number(v[static_cast<Eigen::Index>(j)]) << ',' << format_number(n[0]);
        if (domain.dimension > 1) out << ',' << format_number(n[1]);
        out << '\n';
    }
}

void write_mass_report_csv(std::ostream& out, const DomainQuadrature& domain, const KernelMassReport& report) {
    out << "kind,index,x";
    if (domain.dimension > 1) out << ",y";
    out << ",interior_R,interior_Rbar,interior_Rbarbar,boundary_R,boundary_Rbar,boundary_Rbarbar,violation\n";
    for (const auto& row : report.rows) {
        out << (row.kind == NodeKind::Interior ? "interior" : "boundary") << ',' << row.index << ','
            << format_number(row.x[0]);
        if (domain.dimension > 1) out << ',' << format_number(row.x[1]);
        for (double m : row.interior_mass) out << ',' << format_number(m);
        for (double m : row.boundary_mass) out << ',' << format_number(m);
        out << ',' << (row.violation ? "true" : "false") << '\n';
    }
    const char* names[] = {"R", "Rbar", "Rbarbar"};
    for (std::size_t l = 0; l < 3; ++l) {
        out << "# c1:" << names[l] << '=' << format_number(report.c1[l]) << '\n';
        out << "# c2:" << names[l] << '=' << format_number(report.c2[l]) << '\n';
    }
    out << "# tolerance=" << format_number(report.tolerance) << '\n';
    out << "# violations=" << report.violations() << '\n';
}

void write_eigen_csv(std::ostream& out, const EigenStudy& study) {
    out << "delta,h,n_interior,m,lambda,error,overlap,residual,iterations,wall_seconds\n";
    for (const auto& row : study.rows) {
        for (std::size_t m = 0; m < row.lambda.size(); ++m) {
            out << format_number(row.delta) << ',' << format_number(row.h) << ',' << row.n_interior << ','
                << m + 1 << ',' << format_number(row.lambda[m]) << ',' << format_number(row.error[m]) << ','
                << format_number(row.overlap[m]) << ',' << format_number(row.residual[m]) << ','
                << row.iterations << ',' << format_number(row.wall_seconds) << '\n';
        }
    }
    for (std::size_t m = 0; m < study.slopes.size(); ++m) {
        out << "# slope:lambda" << m + 1 << '=' << format_number(study.slopes[m].slope) << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    write_file(path, [&](std::ostream& out) { out << text; });
}

}  // namespace nlpoisson
