#include "votewire/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "votewire/text.hpp"

namespace votewire::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string F(double v) { return text::FormatFixed(v, 2); }

std::string Escape(const std::string& s) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void Add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Widened by 5% on each side; a single value gets a unit span.
  void Pad() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 0.0) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

class Canvas {
 public:
  Canvas(const std::string& title, Range x, Range y) : x_(x), y_(y) {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + F(kWidth) + "\" height=\"" +
            F(kHeight) + "\" viewBox=\"0 0 " + F(kWidth) + " " + F(kHeight) + "\">\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    Text(kWidth / 2, 22, title, "middle", 15);
  }

  double X(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double Y(double v) const { return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void Axes(const std::string& x_label, const std::string& y_label, bool x_ticks = true) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out_ += "<path d=\"M" + F(x0) + " " + F(y1) + " V" + F(y0) + " H" + F(x1) +
            "\" stroke=\"black\" fill=\"none\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      Text(x0 - 6, Y(v) + 4, Tick(v), "end", 10);
      if (x_ticks) {
        const double u = x_.lo + (x_.hi - x_.lo) * i / 4.0;
        Text(X(u), y0 + 16, Tick(u), "middle", 10);
      }
    }
    Text((x0 + x1) / 2, kHeight - 10, x_label, "middle", 12);
    out_ += "<text x=\"16\" y=\"" + F((y0 + y1) / 2) + "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
            F((y0 + y1) / 2) + ")\">" + Escape(y_label) + "</text>\n";
  }

  void Text(double x, double y, const std::string& s, const char* anchor, int size) {
    out_ += "<text x=\"" + F(x) + "\" y=\"" + F(y) + "\" font-size=\"" + std::to_string(size) +
            "\" text-anchor=\"" + anchor + "\">" + Escape(s) + "</text>\n";
  }

  void Raw(const std::string& s) { out_ += s; }

  void Legend(const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double y = kTop + 12 + 16 * static_cast<double>(i);
      out_ += "<rect x=\"" + F(kWidth - kRight - 120) + "\" y=\"" + F(y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
              kColors[i % 6] + "\"/>\n";
      Text(kWidth - kRight - 105, y, labels[i], "start", 11);
    }
  }

  std::string Done() { return out_ + "</svg>\n"; }

 private:
  static std::string Tick(double v) {
    return std::fabs(v) >= 1000 ? text::FormatFixed(v, 0) : text::FormatFixed(v, 1);
  }

  Range x_, y_;
  std::string out_;
};

}  // namespace

std::string Scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series, const std::vector<Line>& lines) {
  Range x, y;
  for (const auto& s : series) {
    for (const auto& [px, py] : s.points) {
      x.Add(px);
      y.Add(py);
    }
  }
  x.Pad();
  y.Pad();
  Canvas c(title, x, y);
  c.Axes(x_label, y_label);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    labels.push_back(series[i].label);
    std::string group = "<g fill=\"" + std::string(kColors[i % 6]) + "\" fill-opacity=\"0.6\">\n";
    for (const auto& [px, py] : series[i].points) {
      group += "<circle cx=\"" + F(c.X(px)) + "\" cy=\"" + F(c.Y(py)) + "\" r=\"1.8\"/>\n";
    }
    c.Raw(group + "</g>\n");
  }
  for (const auto& l : lines) {
    c.Raw("<line x1=\"" + F(c.X(x.lo)) + "\" y1=\"" + F(c.Y(l.intercept + l.slope * x.lo)) + "\" x2=\"" +
          F(c.X(x.hi)) + "\" y2=\"" + F(c.Y(l.intercept + l.slope * x.hi)) +
          "\" stroke=\"black\" stroke-width=\"1.2\"/>\n");
    labels.push_back(l.label);
  }
  c.Legend(labels);
  return c.Done();
}

std::string BoxPlot(const std::string& title, const std::string& y_label, const std::vector<Box>& boxes) {
  Range x{0.0, static_cast<double>(std::max<std::size_t>(boxes.size(), 1))};
  Range y;
  std::size_t max_n = 1;
  for (const auto& b : boxes) {
    y.Add(b.summary.q10);
    y.Add(b.summary.q90);
    max_n = std::max(max_n, b.summary.n);
  }
  y.Pad();
  Canvas c(title, x, y);
  c.Axes("", y_label, false);
  const double slot = (kWidth - kLeft - kRight) / x.hi;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto& s = boxes[i].summary;
    const double cx = c.X(static_cast<double>(i) + 0.5);
    const double half = 0.4 * slot * static_cast<double>(s.n) / static_cast<double>(max_n);
    const char* color = kColors[i % 6];
    std::string g = "<g stroke=\"black\">\n";
    g += "<line x1=\"" + F(cx) + "\" y1=\"" + F(c.Y(s.q10)) + "\" x2=\"" + F(cx) + "\" y2=\"" + F(c.Y(s.q25)) + "\"/>\n";
    g += "<line x1=\"" + F(cx) + "\" y1=\"" + F(c.Y(s.q75)) + "\" x2=\"" + F(cx) + "\" y2=\"" + F(c.Y(s.q90)) + "\"/>\n";
    g += "<rect x=\"" + F(cx - half) + "\" y=\"" + F(c.Y(s.q75)) + "\" width=\"" + F(2 * half) + "\" height=\"" +
         F(c.Y(s.q25) - c.Y(s.q75)) + "\" fill=\"" + color + "\" fill-opacity=\"0.5\"/>\n";
    g += "<line x1=\"" + F(cx - half) + "\" y1=\"" + F(c.Y(s.median)) + "\" x2=\"" + F(cx + half) + "\" y2=\"" +
         F(c.Y(s.median)) + "\" stroke-width=\"2\"/>\n";
    g += "</g>\n";
    c.Raw(g);
    c.Text(cx, kHeight - kBottom + 16, boxes[i].label + " (n=" + std::to_string(s.n) + ")", "middle", 11);
  }
  return c.Done();
}

std::string QqPlot(const std::string& title, const std::string& x_label, const std::string& y_label,
                   const std::vector<std::pair<double, double>>& points) {
  Range r;
  for (const auto& [a, b] : points) {
    r.Add(a);
    r.Add(b);
  }
  r.Pad();
  Canvas c(title, r, r);
  c.Axes(x_label, y_label);
  c.Raw("<line x1=\"" + F(c.X(r.lo)) + "\" y1=\"" + F(c.Y(r.lo)) + "\" x2=\"" + F(c.X(r.hi)) + "\" y2=\"" +
        F(c.Y(r.hi)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n");
  std::string g = "<g fill=\"" + std::string(kColors[0]) + "\">\n";
  for (const auto& [a, b] : points) g += "<circle cx=\"" + F(c.X(a)) + "\" cy=\"" + F(c.Y(b)) + "\" r=\"2.5\"/>\n";
  c.Raw(g + "</g>\n");
  return c.Done();
}

std::string MeansChart(const std::string& title, const std::string& y_label,
                       const std::vector<std::string>& categories, const std::vector<Series>& series) {
  Range x{-0.5, static_cast<double>(categories.size()) - 0.5};
  Range y;
  for (const auto& s : series) {
    for (const auto& p : s.points) y.Add(p.second);
  }
  y.Pad();
  Canvas c(title, x, y);
  c.Axes("", y_label, false);
  for (std::size_t i = 0; i < categories.size(); ++i) {
    c.Text(c.X(static_cast<double>(i)), kHeight - kBottom + 16, categories[i], "middle", 11);
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < series.size(); ++i) {
    labels.push_back(series[i].label);
    std::string path;
    for (const auto& [px, py] : series[i].points) {
      path += (path.empty() ? "M" : " L") + F(c.X(px)) + " " + F(c.Y(py));
    }
    c.Raw("<path d=\"" + path + "\" stroke=\"" + kColors[i % 6] + "\" stroke-width=\"2\" fill=\"none\"/>\n");
    for (const auto& [px, py] : series[i].points) {
      c.Raw("<circle cx=\"" + F(c.X(px)) + "\" cy=\"" + F(c.Y(py)) + "\" r=\"3\" fill=\"" + kColors[i % 6] + "\"/>\n");
    }
  }
  c.Legend(labels);
  return c.Done();
}

}  // namespace votewire::svg
