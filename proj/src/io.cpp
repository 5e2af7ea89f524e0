#include "mslab/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mslab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot move " + tmp + " into place");
}

std::string curve_text(const ReferenceCurve& curve) {
    std::ostringstream os;
    os << "# mslab curve 1\n";
    os << "nodes " << curve.n << "\n";
    os << "container_radius " << format_double(curve.container.radius) << "\n";
    const int m = curve.fx.max_mode();
    os << "modes " << m << "\n";
    for (int k = 0; k <= m; ++k) {
        os << k << " " << format_double(curve.fx.c[k]) << " " << format_double(curve.fx.s[k])
           << " " << format_double(curve.fy.c[k]) << " " << format_double(curve.fy.s[k]) << "\n";
    }
    return os.str();
}

void write_curve(const ReferenceCurve& curve, const std::string& path) {
    write_text_atomic(path, curve_text(curve));
}

namespace {

std::string next_data_line(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const size_t pos = line.find('#');
        if (pos != std::string::npos) line = line.substr(0, pos);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (!blank) return line;
    }
    return "";
}

} // namespace

ReferenceCurve parse_curve_text(const std::string& text) {
    std::istringstream in(text);
    std::string key;
    int nodes = 0, modes = -1;
    double wall = 0.0;
    {
        std::istringstream ls(next_data_line(in));
        ls >> key >> nodes;
        if (key != "nodes" || nodes <= 0) throw Error("curve file: bad nodes header");
    }
    {
        std::istringstream ls(next_data_line(in));
        ls >> key >> wall;
        if (key != "container_radius" || !(wall > 0.0))
            throw Error("curve file: bad container_radius header");
    }
    {
        std::istringstream ls(next_data_line(in));
        ls >> key >> modes;
        if (key != "modes" || modes < 1) throw Error("curve file: bad modes header");
    }
    TrigSeries fx, fy;
    fx.c.assign(modes + 1, 0.0);
    fx.s.assign(modes + 1, 0.0);
    fy.c.assign(modes + 1, 0.0);
    fy.s.assign(modes + 1, 0.0);
    for (int k = 0; k <= modes; ++k) {
        std::istringstream ls(next_data_line(in));
        int kk = -1;
        ls >> kk >> fx.c[k] >> fx.s[k] >> fy.c[k] >> fy.s[k];
        if (kk != k) throw Error("curve file: coefficient lines out of order");
    }
    const Container cont{wall, {0.0, 0.0}};
    return build_reference_curve(CurveSpec::cartesian(fx, fy, nodes), cont);
}

ReferenceCurve read_curve(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_curve_text(os.str());
}

std::string height_field_text(const HeightField& field) {
    std::ostringstream os;
    os << "# mslab height-field 1\n";
    os << "# base curve\n";
    os << curve_text(field.base);
    os << "table " << field.base.n << "\n";
    for (int j = 0; j < field.base.n; ++j)
        os << format_double(field.base.node_theta(j)) << " " << format_double(field.rho[j])
           << "\n";
    return os.str();
}

void write_height_field(const HeightField& field, const std::string& path) {
    write_text_atomic(path, height_field_text(field));
}

HeightField parse_height_field_text(const std::string& text) {
    const size_t pos = text.find("table ");
    if (pos == std::string::npos) throw Error("height-field file: missing table");
    const ReferenceCurve base = parse_curve_text(text.substr(0, pos));
    std::istringstream in(text.substr(pos));
    std::string key;
    int count = 0;
    {
        std::istringstream ls(next_data_line(in));
        ls >> key >> count;
        if (key != "table" || count != base.n) throw Error("height-field file: bad table header");
    }
    std::vector<double> rho(count, 0.0);
    for (int j = 0; j < count; ++j) {
        std::istringstream ls(next_data_line(in));
        double theta = 0.0;
        ls >> theta >> rho[j];
    }
    const TubeData tube = tube_and_ball(base, base.container);
    return make_height_field(base, tube, std::move(rho));
}

HeightField read_height_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_height_field_text(os.str());
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    if (traj.is_interface) {
        os << "t,perimeter,area,residual,ball_radius,eta,xgamma_norm\n";
        for (size_t j = 0; j < traj.times.size(); ++j) {
            os << format_double(traj.times[j]) << "," << format_double(traj.perimeter[j]) << ","
               << format_double(traj.area[j]) << "," << format_double(traj.residual[j]) << ","
               << format_double(traj.ball_radius[j]) << "," << format_double(traj.eta[j]) << ","
               << format_double(traj.xgamma_norm[j]) << "\n";
        }
    } else {
        os << "t,x0_norm,xgamma_norm,residual\n";
        for (size_t j = 0; j < traj.times.size(); ++j) {
            os << format_double(traj.times[j]) << "," << format_double(traj.x0_norm[j]) << ","
               << format_double(traj.xgamma_norm[j]) << "," << format_double(traj.residual[j])
               << "\n";
        }
    }
    return os.str();
}

std::string curve_svg(const ReferenceCurve& curve, const Container& container) {
    const double r = container.radius;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(-r) << " "
       << format_double(-r) << " " << format_double(2 * r) << " " << format_double(2 * r)
       << "\">\n";
    os << "<circle cx=\"0\" cy=\"0\" r=\"" << format_double(r)
       << "\" fill=\"none\" stroke=\"gray\" stroke-width=\"" << format_double(0.004 * r)
       << "\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" << format_double(0.006 * r)
       << "\" points=\"";
    for (int j = 0; j <= curve.n; ++j) {
        const Vec2 q = curve.p[j % curve.n];
        if (j) os << " ";
        os << format_double(q.x) << "," << format_double(-q.y);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

std::string linearization_report_text(const LinearizationReport& rep) {
    std::ostringstream os;
    os << "linearization report\n";
    os << "modes " << rep.modes << "\n";
    os << "spectral_radius " << format_double(rep.spectral_radius) << "\n";
    os << "asymmetry " << format_double(rep.asymmetry) << "\n";
    os << "kernel_dim " << rep.kernel_dim << "\n";
    os << "kernel_residuals " << format_double(rep.kernel_residuals[0]) << " "
       << format_double(rep.kernel_residuals[1]) << " " << format_double(rep.kernel_residuals[2])
       << "\n";
    os << "verdict " << (rep.normally_stable ? "normally-stable" : "not-normally-stable") << "\n";
    os << "mode_eigenvalues\n";
    for (int k = 0; k <= rep.modes; ++k)
        os << k << " " << format_double(mode_eigenvalue(rep, k)) << "\n";
    os << "eigenvalues_ascending\n";
    for (double ev : rep.eigenvalues) os << format_double(ev) << "\n";
    return os.str();
}

std::string probe_csv(const TwoPhaseSolution& sol, const std::vector<Vec2>& points) {
    std::ostringstream os;
    os << "x,y,u\n";
    for (const Vec2& q : points)
        os << format_double(q.x) << "," << format_double(q.y) << ","
           << format_double(sol.evaluate(q)) << "\n";
    return os.str();
}

} // namespace mslab
