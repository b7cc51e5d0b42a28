#include "smotecls/latent_export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smotecls {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_latent_csv(const std::string& path, const LatentView& view) {
  std::ofstream out = open_out(path);
  for (std::size_t j = 0; j < view.latent_dim; ++j) out << "z_" << (j + 1) << ',';
  out << "y,pseudo,density,kept\n";
  for (std::size_t i = 0; i < view.z.rows; ++i) {
    for (std::size_t j = 0; j < view.latent_dim; ++j) out << fmt(view.z.at(i, j)) << ',';
    out << (view.labels[i] == ClassLabel::Minor ? "m" : "M") << ','
        << pseudo_label_name(view.pseudo_labels[i]) << ',';
    if (std::isfinite(view.density[i])) out << fmt(view.density[i]);
    out << ',' << (view.kept[i] != 0 ? 1 : 0) << '\n';
  }
}

void write_filter_report_csv(const std::string& path, const FilterReport& report) {
  std::ofstream out = open_out(path);
  out << "row,group,density,kept\n";
  for (const auto& e : report.entries) {
    out << e.row << ',' << pseudo_label_name(e.group) << ',';
    if (std::isfinite(e.density)) out << fmt(e.density);
    out << ',' << (e.kept ? 1 : 0) << '\n';
  }
  out << "# easy_threshold," << fmt(report.easy_threshold) << '\n';
  out << "# hard_threshold," << fmt(report.hard_threshold) << '\n';
}

void write_latent_svg(const std::string& path, const LatentView& view) {
  // first two latent coordinates; higher dimensions are not plotted
  constexpr double kWidth = 720, kHeight = 560, kMargin = 50;
  double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
  if (view.z.rows > 0) {
    lo_x = hi_x = view.z.at(0, 0);
    lo_y = hi_y = view.latent_dim > 1 ? view.z.at(0, 1) : 0.0;
    for (std::size_t i = 0; i < view.z.rows; ++i) {
      const double x = view.z.at(i, 0);
      const double y = view.latent_dim > 1 ? view.z.at(i, 1) : 0.0;
      lo_x = std::min(lo_x, x);
      hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y);
      hi_y = std::max(hi_y, y);
    }
  }
  if (hi_x - lo_x < 1e-12) hi_x = lo_x + 1.0;
  if (hi_y - lo_y < 1e-12) hi_y = lo_y + 1.0;

  auto sx = [&](double x) {
    return kMargin + (x - lo_x) / (hi_x - lo_x) * (kWidth - 2 * kMargin);
  };
  auto sy = [&](double y) {
    return kHeight - kMargin - (y - lo_y) / (hi_y - lo_y) * (kHeight - 2 * kMargin);
  };
  auto color = [](PseudoLabel p) {
    switch (p) {
      case PseudoLabel::EasyMajor: return "#4477cc";
      case PseudoLabel::HardMajor: return "#884499";
      case PseudoLabel::EasyMinor: return "#ee8822";
      case PseudoLabel::HardMinor: return "#cc3333";
    }
    return "#000000";
  };

  std::ofstream out = open_out(path);
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"#999\"/>\n",
                kMargin, kMargin, kWidth - 2 * kMargin, kHeight - 2 * kMargin);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"#333\">z1: [%.3g, %.3g]  "
                "z2: [%.3g, %.3g]</text>\n",
                kMargin, kHeight - kMargin + 24, lo_x, hi_x, lo_y, hi_y);
  out << buf;

  for (std::size_t i = 0; i < view.z.rows; ++i) {
    const double x = sx(view.z.at(i, 0));
    const double y = sy(view.latent_dim > 1 ? view.z.at(i, 1) : 0.0);
    const char* c = color(view.pseudo_labels[i]);
    if (view.kept[i] != 0) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\" fill-opacity=\"0.7\"/>\n",
                    x, y, c);
    } else {
      std::snprintf(buf, sizeof(buf),
                    "<path d=\"M %.2f %.2f L %.2f %.2f M %.2f %.2f L %.2f %.2f\" stroke=\"%s\" "
                    "stroke-width=\"1.5\"/>\n",
                    x - 3, y - 3, x + 3, y + 3, x - 3, y + 3, x + 3, y - 3, c);
    }
  }

  const char* names[4] = {"easy-major", "hard-major", "easy-minor", "hard-minor"};
  for (int p = 0; p < 4; ++p) {
    const double ly = kMargin + 8 + 18 * p;
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"#333\">%s</text>\n",
                  kWidth - kMargin - 110.0, ly, color(static_cast<PseudoLabel>(p)),
                  kWidth - kMargin - 100.0, ly + 4, names[p]);
    out << buf;
  }
  out << "<text x=\"" << (kWidth - kMargin - 110) << "\" y=\"" << (kMargin + 8 + 18 * 4 + 4)
      << "\" font-size=\"12\" fill=\"#333\">x = filtered out</text>\n";
  out << "</svg>\n";
}

}  // namespace smotecls
