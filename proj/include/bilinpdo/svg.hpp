#ifndef BILINPDO_SVG_HPP
#define BILINPDO_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "bilinpdo/slope.hpp"

namespace bilinpdo {

/// Minimal scatter plot with an optional least-squares line and slope
/// annotation. Axes are linear in whatever the caller feeds in (callers
/// pass log2 values for log-log plots).
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel)
      : title_(std::move(title)),
        xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)) {}

  void points(const std::vector<double>& x, const std::vector<double>& y) {
    xs_ = x;
    ys_ = y;
  }

  void fit_line(bool on) { fit_ = on; }

  std::string str() const {
    const double W = 640, H = 440;
    const double L = 70, R = 20, T = 40, B = 50;
    double xlo = xs_.empty() ? 0 : *std::min_element(xs_.begin(), xs_.end());
    double xhi = xs_.empty() ? 1 : *std::max_element(xs_.begin(), xs_.end());
    double ylo = ys_.empty() ? 0 : *std::min_element(ys_.begin(), ys_.end());
    double yhi = ys_.empty() ? 1 : *std::max_element(ys_.begin(), ys_.end());
    if (xhi == xlo) xhi = xlo + 1;
    if (yhi == ylo) yhi = ylo + 1;
    double xpad = 0.06 * (xhi - xlo), ypad = 0.08 * (yhi - ylo);
    xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;
    auto px = [&](double x) {
      return L + (x - xlo) / (xhi - xlo) * (W - L - R);
    };
    auto py = [&](double y) {
      return H - B - (y - ylo) / (yhi - ylo) * (H - T - B);
    };
    char buf[256];
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"440\" viewBox=\"0 0 640 440\">\n";
    s += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                  "fill=\"none\" stroke=\"black\"/>\n",
                  L, T, W - L - R, H - T - B);
    s += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"24\" font-size=\"15\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  (L + W - R) / 2, title_.c_str());
    s += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  (L + W - R) / 2, H - 12, xlabel_.c_str());
    s += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"16\" y=\"%.1f\" font-size=\"12\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 16 %.1f)\">"
                  "%s</text>\n",
                  (T + H - B) / 2, (T + H - B) / 2, ylabel_.c_str());
    s += buf;
    // axis ticks: ends only, the data carries the scale
    for (double x : {xlo + xpad, xhi - xpad}) {
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                    "text-anchor=\"middle\">%.4g</text>\n",
                    px(x), H - B + 16, x);
      s += buf;
    }
    for (double y : {ylo + ypad, yhi - ypad}) {
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                    "text-anchor=\"end\">%.4g</text>\n",
                    L - 6, py(y) + 4, y);
      s += buf;
    }
    if (fit_ && xs_.size() >= 2) {
      double slope = fit_slope(xs_, ys_);
      double sx = 0, sy = 0;
      for (std::size_t i = 0; i < xs_.size(); ++i) {
        sx += xs_[i];
        sy += ys_[i];
      }
      double mx = sx / xs_.size(), my = sy / ys_.size();
      double x0 = xlo + xpad / 2, x1 = xhi - xpad / 2;
      std::snprintf(buf, sizeof(buf),
                    "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                    "stroke=\"#b22\" stroke-width=\"1.5\"/>\n",
                    px(x0), py(my + slope * (x0 - mx)), px(x1),
                    py(my + slope * (x1 - mx)));
      s += buf;
      std::snprintf(buf, sizeof(buf),
                    "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" "
                    "fill=\"#b22\">slope = %.4f</text>\n",
                    L + 12, T + 20, slope);
      s += buf;
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3.5\" "
                    "fill=\"#246\"/>\n",
                    px(xs_[i]), py(ys_[i]));
      s += buf;
    }
    s += "</svg>\n";
    return s;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << str();
  }

 private:
  std::string title_, xlabel_, ylabel_;
  std::vector<double> xs_, ys_;
  bool fit_ = true;
};

}  // namespace bilinpdo

#endif
