#include "tnoma/harness/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace tnoma::harness {

namespace {

struct Curve {
    std::vector<double> snr;
    std::vector<double> value;
};

Curve extract(const std::vector<ResultRow>& rows, const CompareOptions& o) {
    std::map<double, double> pts;
    for (const auto& r : rows)
        if (r.metric == o.metric && r.user == o.user) pts[r.snr_db] = r.value;
    Curve c;
    for (auto& [s, v] : pts) {
        c.snr.push_back(s);
        c.value.push_back(v);
    }
    if (c.snr.size() < 2) throw std::runtime_error("compare: need at least two points per curve");
    return c;
}

// SNR at which the curve crosses `level`, linear in log10(value); first
// crossing wins. NaN when the level is never bracketed.
double snr_at_level(const Curve& c, double level) {
    const double target = std::log10(std::max(level, 1e-300));
    for (std::size_t i = 0; i + 1 < c.snr.size(); ++i) {
        const double v0 = std::log10(std::max(c.value[i], 1e-300));
        const double v1 = std::log10(std::max(c.value[i + 1], 1e-300));
        if (v0 == target) return c.snr[i];
        if ((v0 - target) * (v1 - target) <= 0.0 && v0 != v1)
            return c.snr[i] + (target - v0) * (c.snr[i + 1] - c.snr[i]) / (v1 - v0);
    }
    if (!c.value.empty() && std::log10(std::max(c.value.back(), 1e-300)) == target) return c.snr.back();
    return std::numeric_limits<double>::quiet_NaN();
}

void write_plot(const std::string& path, const Curve& a, const Curve& b, const CompareOptions& o) {
    const int w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    double smin = 1e300, smax = -1e300, vmin = 0.0, vmax = -300.0;
    auto scan = [&](const Curve& c) {
        for (std::size_t i = 0; i < c.snr.size(); ++i) {
            smin = std::min(smin, c.snr[i]);
            smax = std::max(smax, c.snr[i]);
            const double lv = std::log10(std::max(c.value[i], 1e-300));
            vmin = std::min(vmin, 0.0);
            vmax = std::max(vmax, lv);
            vmin = std::min(vmin, lv);
        }
    };
    vmax = -1e300;
    vmin = 1e300;
    scan(a);
    scan(b);
    if (smax <= smin) smax = smin + 1.0;
    if (vmax <= vmin) vmax = vmin + 1.0;
    auto px = [&](double s) { return ml + (s - smin) / (smax - smin) * (w - ml - mr); };
    auto py = [&](double lv) { return mt + (vmax - lv) / (vmax - vmin) * (h - mt - mb); };
    auto path_of = [&](const Curve& c) {
        std::string d;
        char buf[64];
        for (std::size_t i = 0; i < c.snr.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%c%.2f %.2f ", i ? 'L' : 'M', px(c.snr[i]),
                          py(std::log10(std::max(c.value[i], 1e-300))));
            d += buf;
        }
        return d;
    };
    std::ofstream f(path);
    if (!f) throw std::runtime_error("compare: cannot write " + path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    for (int lv = static_cast<int>(std::floor(vmin)); lv <= static_cast<int>(std::ceil(vmax)); ++lv)
        f << "<line x1='" << ml << "' y1='" << py(lv) << "' x2='" << w - mr << "' y2='" << py(lv)
          << "' stroke='#ddd'/><text x='8' y='" << py(lv) + 4 << "' font-size='11'>1e" << lv
          << "</text>\n";
    for (double s = std::ceil(smin / 5.0) * 5.0; s <= smax; s += 5.0)
        f << "<line x1='" << px(s) << "' y1='" << mt << "' x2='" << px(s) << "' y2='" << h - mb
          << "' stroke='#eee'/><text x='" << px(s) - 8 << "' y='" << h - mb + 16
          << "' font-size='11'>" << s << "</text>\n";
    f << "<path d='" << path_of(a) << "' fill='none' stroke='#c33' stroke-width='2'/>\n";
    f << "<path d='" << path_of(b) << "' fill='none' stroke='#36c' stroke-width='2'/>\n";
    f << "<text x='" << ml << "' y='" << h - 14 << "' font-size='12'>snr_db vs " << o.metric << " ("
      << o.user << "); A=red B=blue</text>\n";
    f << "</svg>\n";
}

} // namespace

CompareResult compare_rows(const std::vector<ResultRow>& ra, const std::vector<ResultRow>& rb,
                           const CompareOptions& opts) {
    Curve a = extract(ra, opts);
    Curve b = extract(rb, opts);

    CompareResult res;
    res.snr_grid = a.snr;
    res.value_a = a.value;
    res.grids_aligned = a.snr == b.snr;
    res.value_b.resize(a.snr.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < a.snr.size(); ++i) {
        auto it = std::find(b.snr.begin(), b.snr.end(), a.snr[i]);
        if (it != b.snr.end()) res.value_b[i] = b.value[static_cast<std::size_t>(it - b.snr.begin())];
    }
    res.gain_db.resize(a.snr.size());
    for (std::size_t i = 0; i < a.snr.size(); ++i) {
        const double s_b = snr_at_level(b, a.value[i]);
        res.gain_db[i] = s_b - a.snr[i];
    }
    const double sa = snr_at_level(a, opts.at_value);
    const double sb = snr_at_level(b, opts.at_value);
    res.gain_at_target = sb - sa;

    char buf[256];
    std::string text = "snr_db         A             B             gain_db\n";
    for (std::size_t i = 0; i < a.snr.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-8.4g %13.6g %13.6g %11.4g\n", a.snr[i], a.value[i],
                      res.value_b[i], res.gain_db[i]);
        text += buf;
    }
    std::snprintf(buf, sizeof(buf), "gain of A over B at %s=%g: %.4g dB\n", opts.metric.c_str(),
                  opts.at_value, res.gain_at_target);
    text += buf;
    if (!res.grids_aligned) text += "warning: SNR grids differ; deltas use log-domain interpolation\n";
    res.summary = text;

    if (!opts.plot_path.empty()) write_plot(opts.plot_path, a, b, opts);
    return res;
}

CompareResult compare_files(const std::string& path_a, const std::string& path_b,
                            const CompareOptions& opts) {
    return compare_rows(read_csv(path_a), read_csv(path_b), opts);
}

} // namespace tnoma::harness
