#include "confgeo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace confgeo {

namespace {

struct Rgb {
  int r, g, b;
};

// Dark blue -> cyan -> yellow ramp, linear between fixed stops.
Rgb ramp(double t) {
  static const Rgb stops[] = {
      {13, 8, 135}, {84, 39, 143}, {158, 54, 132}, {211, 92, 94},
      {244, 136, 73}, {253, 191, 58}, {240, 249, 33}};
  constexpr int n = sizeof(stops) / sizeof(stops[0]);
  t = std::clamp(t, 0.0, 1.0);
  double x = t * (n - 1);
  int k = std::min(static_cast<int>(x), n - 2);
  double f = x - k;
  auto mix = [f](int a, int b) {
    return static_cast<int>(std::lround(a + f * (b - a)));
  };
  return {mix(stops[k].r, stops[k + 1].r), mix(stops[k].g, stops[k + 1].g),
          mix(stops[k].b, stops[k + 1].b)};
}

}  // namespace

std::string svg_heatmap(const ScalarField& f) {
  const Grid& g = f.grid();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int id = 0; id < g.size(); ++id) {
    if (!g.inside_id(id)) continue;
    double v = f.at_id(id);
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  double span = hi - lo;

  const int cell = 2;  // pixels per cell
  int w = g.nx() * cell, h = g.ny() * cell + 16;
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\">\n",
                w, h);
  out += buf;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.inside(i, j)) continue;
      double v = f.at(i, j);
      double t = span > 0 ? (v - lo) / span : 0.5;
      Rgb c = ramp(t);
      // y flipped so the image matches plane orientation
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                    "fill=\"rgb(%d,%d,%d)\"/>\n",
                    i * cell, (g.ny() - 1 - j) * cell, cell, cell, c.r, c.g,
                    c.b);
      out += buf;
    }
  std::snprintf(buf, sizeof buf,
                "<text x=\"2\" y=\"%d\" font-size=\"10\" "
                "font-family=\"monospace\">min=%.6g max=%.6g</text>\n",
                g.ny() * cell + 12, lo, hi);
  out += buf;
  out += "</svg>\n";
  return out;
}

}  // namespace confgeo
