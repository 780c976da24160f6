#include "adago/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "adago/errors.hpp"

namespace adago::harness {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

class Chart {
public:
    Chart(std::string title, std::string xlabel, std::string ylabel, bool log_x, bool log_y)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), log_x_(log_x),
          log_y_(log_y) {}

    void add(Series s) { series_.push_back(std::move(s)); }

    void write(const std::filesystem::path& path) const {
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : series_)
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!usable(s.x[i], s.y[i])) continue;
                x0 = std::min(x0, tx(s.x[i]));
                x1 = std::max(x1, tx(s.x[i]));
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
        if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 == x0) x1 = x0 + 1;
        if (y1 == y0) y1 = y0 + 1;

        const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
        auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * pw; };
        auto py = [&](double v) { return kTop + ph - (ty(v) - y0) / (y1 - y0) * ph; };

        std::ofstream out(path, std::ios::binary);
        if (!out) throw InvalidInput("cannot write " + path.string());
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
            << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
            << escape(title_) << "</text>\n";
        out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
            << "\" fill=\"none\" stroke=\"#333\"/>\n";

        for (int i = 0; i <= 4; ++i) {
            const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
            const double sx = kLeft + pw * i / 4.0, sy = kTop + ph - ph * i / 4.0;
            out << "<line x1=\"" << sx << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx << "\" y2=\"" << kTop + ph + 5
                << "\" stroke=\"#333\"/>\n";
            out << "<text x=\"" << sx << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
                << fmt(log_x_ ? std::pow(10.0, fx) : fx) << "</text>\n";
            out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy << "\" x2=\"" << kLeft << "\" y2=\"" << sy
                << "\" stroke=\"#333\"/>\n";
            out << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
                << fmt(log_y_ ? std::pow(10.0, fy) : fy) << "</text>\n";
        }
        out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
            << escape(xlabel_) << (log_x_ ? " (log)" : "") << "</text>\n";
        out << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
            << escape(ylabel_) << (log_y_ ? " (log)" : "") << "</text>\n";

        for (std::size_t k = 0; k < series_.size(); ++k) {
            const auto& s = series_[k];
            const char* color = kPalette[k % std::size(kPalette)];
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
                << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (usable(s.x[i], s.y[i])) out << fmt(px(s.x[i]), "%.2f") << ',' << fmt(py(s.y[i]), "%.2f") << ' ';
            out << "\"/>\n";
            const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
            const double lx = kLeft + pw + 12;
            out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly - 4
                << "\" stroke=\"" << color << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
                << "/>\n";
            out << "<text x=\"" << lx + 28 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
        }
        out << "</svg>\n";
    }

private:
    bool usable(double x, double y) const {
        return std::isfinite(x) && std::isfinite(y) && (!log_x_ || x > 0) && (!log_y_ || y > 0);
    }
    double tx(double v) const { return log_x_ ? std::log10(v) : v; }
    double ty(double v) const { return log_y_ ? std::log10(v) : v; }

    std::string title_, xlabel_, ylabel_;
    bool log_x_, log_y_;
    std::vector<Series> series_;
};

} // namespace

PlotFiles emit_plots(const std::vector<LabeledTrajectory>& series, const std::filesystem::path& out_dir,
                     const std::optional<diagnostics::RateFit>& fit) {
    if (series.empty()) throw InvalidInput("emit_plots: need at least one trajectory");
    std::filesystem::create_directories(out_dir);
    PlotFiles files{out_dir / "loss.svg", out_dir / "grad_norm.svg", out_dir / "plot_data.csv"};

    bool positive = true;
    for (const auto& s : series)
        for (const auto& r : s.trajectory.records()) positive = positive && r.train_loss > 0 && (!r.test_loss || *r.test_loss > 0);

    Chart loss("Loss", "step", "loss", false, positive);
    Chart grad("Running average of nuclear gradient norm", "step", "(1/T) sum ||grad||_*", true, true);
    std::ofstream csv(files.data_csv, std::ios::binary);
    if (!csv) throw InvalidInput("cannot write " + files.data_csv.string());
    csv << "series,label,t,value\n";

    for (const auto& s : series) {
        Series train{s.label + " train", {}, {}}, test{s.label + " test", {}, {}, true}, avg{s.label, {}, {}};
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : s.trajectory.records()) {
            const double t = static_cast<double>(r.t);
            train.x.push_back(t);
            train.y.push_back(r.train_loss);
            csv << "train_loss," << s.label << ',' << r.t << ',' << fmt(r.train_loss, "%.17g") << '\n';
            if (r.test_loss) {
                test.x.push_back(t);
                test.y.push_back(*r.test_loss);
                csv << "test_loss," << s.label << ',' << r.t << ',' << fmt(*r.test_loss, "%.17g") << '\n';
            }
            sum += r.grad_norm_nuclear;
            ++n;
            avg.x.push_back(t);
            avg.y.push_back(sum / static_cast<double>(n));
            csv << "avg_nuclear_grad," << s.label << ',' << r.t << ',' << fmt(avg.y.back(), "%.17g") << '\n';
        }
        loss.add(std::move(train));
        if (!test.x.empty()) loss.add(std::move(test));
        grad.add(std::move(avg));
    }
    if (fit) {
        Series line{"fit slope " + fmt(fit->slope, "%.3f"), {}, {}, true};
        for (int i = 0; i <= 20; ++i) {
            const double t = fit->t_min * std::pow(fit->t_max / fit->t_min, i / 20.0);
            line.x.push_back(t);
            line.y.push_back(std::exp(fit->intercept) * std::pow(t, fit->slope));
        }
        grad.add(std::move(line));
    }
    loss.write(files.loss_svg);
    grad.write(files.grad_svg);
    return files;
}

} // namespace adago::harness
