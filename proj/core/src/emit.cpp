#include "netspread/emit.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "netspread/errors.hpp"
#include "netspread/geo.hpp"
#include "netspread/stats.hpp"

namespace netspread {

namespace {

using ojson = nlohmann::ordered_json;

Rgb lerp(Rgb a, Rgb b, double t) {
  auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::string fill(Rgb c) { return "fill=\"" + to_hex(c) + "\""; }

// Horizontal box at vertical centre `cy` along the x mapping of `f`.
void horizontal_box(svg::Document& doc, const svg::PlotFrame& f, const BoxStats& b, double cy, double half,
                    std::string_view label) {
  doc.open_group("class=\"box\" stroke=\"#333\" fill=\"none\"");
  doc.line(f.px(b.whisker_lo), cy, f.px(b.q1), cy, "");
  doc.line(f.px(b.q3), cy, f.px(b.whisker_hi), cy, "");
  doc.line(f.px(b.whisker_lo), cy - half / 2, f.px(b.whisker_lo), cy + half / 2, "");
  doc.line(f.px(b.whisker_hi), cy - half / 2, f.px(b.whisker_hi), cy + half / 2, "");
  doc.rect(f.px(b.q1), cy - half, std::max(0.0, f.px(b.q3) - f.px(b.q1)), 2 * half, "fill=\"#deebf7\"");
  doc.line(f.px(b.median), cy - half, f.px(b.median), cy + half, "stroke-width=\"2\"");
  for (double o : b.outliers) doc.circle(f.px(o), cy, 2.5, "class=\"outlier\"");
  doc.text(f.left - 8, cy + 4, label, "stroke=\"none\" fill=\"#000\" text-anchor=\"end\" font-size=\"10\"");
  doc.close_group();
}

// Vertical box at horizontal centre `cx` along the y mapping of `f`.
void vertical_box(svg::Document& doc, const svg::PlotFrame& f, const BoxStats& b, double cx, double half) {
  doc.open_group("class=\"box\" stroke=\"#333\" fill=\"none\"");
  doc.line(cx, f.py(b.whisker_lo), cx, f.py(b.q1), "");
  doc.line(cx, f.py(b.q3), cx, f.py(b.whisker_hi), "");
  doc.line(cx - half / 2, f.py(b.whisker_lo), cx + half / 2, f.py(b.whisker_lo), "");
  doc.line(cx - half / 2, f.py(b.whisker_hi), cx + half / 2, f.py(b.whisker_hi), "");
  doc.rect(cx - half, f.py(b.q3), 2 * half, std::max(0.0, f.py(b.q1) - f.py(b.q3)), "fill=\"#deebf7\"");
  doc.line(cx - half, f.py(b.median), cx + half, f.py(b.median), "stroke-width=\"2\"");
  for (double o : b.outliers) doc.circle(cx, f.py(o), 2.5, "class=\"outlier\"");
  doc.close_group();
}

// Samples the curve across [lo, hi]; points leaving the frame split the line.
void draw_curve(svg::Document& doc, const svg::PlotFrame& f, const FitResult& fit, double lo, double hi) {
  if (requires_positive_x(fit.family) && lo <= 0.0) lo = std::max(lo, hi * 1e-3);
  if (!(hi > lo)) return;
  std::vector<std::vector<std::pair<double, double>>> segments(1);
  for (int i = 0; i < kCurveSamples; ++i) {
    const double x = i + 1 == kCurveSamples ? hi : lo + (hi - lo) * i / (kCurveSamples - 1);
    const double y = evaluate(fit.family, fit.coefficients, x);
    if (!std::isfinite(y) || y < f.y_min || y > f.y_max) {
      if (!segments.back().empty()) segments.emplace_back();
      continue;
    }
    segments.back().emplace_back(f.px(x), f.py(y));
  }
  doc.open_group("class=\"fit\" data-family=\"" + std::string(to_string(fit.family)) + "\"");
  for (const auto& s : segments) {
    if (s.size() >= 2) doc.polyline(s, "fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\"");
  }
  doc.close_group();
}

void plus_mark(svg::Document& doc, double x, double y) {
  doc.raw("<path class=\"mean\" d=\"M" + svg::fmt(x - 5) + " " + svg::fmt(y) + " H" + svg::fmt(x + 5) + " M" +
          svg::fmt(x) + " " + svg::fmt(y - 5) + " V" + svg::fmt(y + 5) + "\" stroke=\"#000\" stroke-width=\"2\"/>");
}

}  // namespace

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", std::clamp(c.r, 0, 255), std::clamp(c.g, 0, 255),
                std::clamp(c.b, 0, 255));
  return buf;
}

Rgb continuous_color(double value, double lo, double hi) {
  if (!(hi > lo)) return kPaletteLow;
  const double t = std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
  if (t <= 0.5) return lerp(kPaletteLow, kPaletteMid, 2.0 * t);
  return lerp(kPaletteMid, kPaletteHigh, 2.0 * t - 1.0);
}

MapFiles emit_choropleth(const FlowNetwork& net, const ChoroplethLayer& layer) {
  if (layer.values.size() != net.node_count()) {
    throw EmissionError("choropleth values cover " + std::to_string(layer.values.size()) + " of " +
                        std::to_string(net.node_count()) + " nodes");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : layer.values) {
    if (!v) continue;
    lo = std::min(lo, *v);
    hi = std::max(hi, *v);
  }
  if (!std::isfinite(lo)) throw EmissionError("choropleth '" + layer.title + "' has no values");

  auto color_of = [&](const std::optional<double>& v) {
    if (!v) return kNeutral;
    if (layer.palette == Palette::Binary) return *v == 0.0 ? kStageFirst : kStageSecond;
    return continuous_color(*v, lo, hi);
  };

  ojson features = ojson::array();
  for (const auto& node : net.nodes()) {
    const auto& v = layer.values[node.id];
    const auto m = web_mercator(node.capital_lon, node.capital_lat);
    ojson props;
    props["code"] = node.code;
    props["name"] = node.name;
    props["continent"] = std::string(to_string(node.continent));
    props[layer.value_name] = v ? ojson(*v) : ojson(nullptr);
    if (layer.palette == Palette::Binary) {
      props["category"] = v ? ojson(*v == 0.0 ? layer.categories.first : layer.categories.second) : ojson(nullptr);
    }
    props["color"] = to_hex(color_of(v));
    props["mercator_x"] = m.x;
    props["mercator_y"] = m.y;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {node.capital_lon, node.capital_lat}}}},
                        {"properties", props}});
  }
  ojson palette;
  if (layer.palette == Palette::Continuous) {
    palette = {{"type", "continuous"},
               {"interpolation", "linear RGB"},
               {"anchors", {to_hex(kPaletteLow), to_hex(kPaletteMid), to_hex(kPaletteHigh)}},
               {"domain", {lo, hi}}};
  } else {
    palette = {{"type", "binary"},
               {layer.categories.first, to_hex(kStageFirst)},
               {layer.categories.second, to_hex(kStageSecond)}};
  }
  palette["missing"] = to_hex(kNeutral);
  ojson doc = {{"type", "FeatureCollection"},
               {"metadata",
                {{"title", layer.title},
                 {"value", layer.value_name},
                 {"projection", "EPSG:3857 (spherical Web Mercator, R = 6378137 m)"},
                 {"palette", palette}}},
               {"features", features}};

  MapFiles out;
  out.geojson = doc.dump(2) + "\n";

  // Plate: longitudes [-180, 180], latitudes [-60, 85].
  const double x_lo = web_mercator(-180, 0).x;
  const double x_hi = web_mercator(180, 0).x;
  const double y_lo = web_mercator(0, -60).y;
  const double y_hi = web_mercator(0, 85).y;
  svg::PlotFrame f{20, 50, 960, 960 * (y_hi - y_lo) / (x_hi - x_lo), x_lo, x_hi, y_lo, y_hi};
  svg::Document svgdoc(1000, f.top + f.height + 80);
  svgdoc.text(20, 30, layer.title, "font-family=\"sans-serif\" font-size=\"16\" font-weight=\"bold\"");
  svgdoc.rect(f.left, f.top, f.width, f.height, "class=\"plate\" fill=\"#eef5fb\" stroke=\"#333\"");
  svgdoc.open_group("class=\"graticule\" stroke=\"#c6d6e6\" stroke-width=\"0.5\"");
  for (int lon = -150; lon <= 150; lon += 30) {
    const double x = f.px(web_mercator(lon, 0).x);
    svgdoc.line(x, f.top, x, f.top + f.height, "");
  }
  for (int lat = -30; lat <= 60; lat += 30) {
    const double y = f.py(web_mercator(0, lat).y);
    svgdoc.line(f.left, y, f.left + f.width, y, "");
  }
  svgdoc.close_group();
  svgdoc.open_group("class=\"nodes\" stroke=\"#333\" stroke-width=\"0.6\"");
  for (const auto& node : net.nodes()) {
    const auto& v = layer.values[node.id];
    const auto m = web_mercator(node.capital_lon, node.capital_lat);
    const double y = std::clamp(m.y, y_lo, y_hi);
    std::string label = node.code + ": ";
    if (!v) label += "missing";
    else if (layer.palette == Palette::Binary) label += *v == 0.0 ? layer.categories.first : layer.categories.second;
    else label += svg::tick_label(*v);
    svgdoc.raw("<circle class=\"node\" cx=\"" + svg::fmt(f.px(m.x)) + "\" cy=\"" + svg::fmt(f.py(y)) +
               "\" r=\"6\" " + fill(color_of(v)) + "><title>" + svg::escape(label) + "</title></circle>");
  }
  svgdoc.close_group();

  const double ly = f.top + f.height + 30;
  if (layer.palette == Palette::Continuous) {
    svgdoc.raw(
        "<defs><linearGradient id=\"ramp\"><stop offset=\"0\" stop-color=\"" + to_hex(kPaletteLow) +
        "\"/><stop offset=\"0.5\" stop-color=\"" + to_hex(kPaletteMid) + "\"/><stop offset=\"1\" stop-color=\"" +
        to_hex(kPaletteHigh) + "\"/></linearGradient></defs>");
    svgdoc.rect(20, ly, 240, 14, "class=\"legend\" fill=\"url(#ramp)\" stroke=\"#333\"");
    svgdoc.text(20, ly + 30, svg::tick_label(lo), "font-family=\"sans-serif\" font-size=\"11\"");
    svgdoc.text(260, ly + 30, svg::tick_label(hi), "font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\"");
    svgdoc.text(280, ly + 12, layer.value_name, "font-family=\"sans-serif\" font-size=\"12\"");
  } else {
    svgdoc.rect(20, ly, 14, 14, "class=\"legend\" " + fill(kStageFirst));
    svgdoc.text(40, ly + 12, layer.categories.first, "font-family=\"sans-serif\" font-size=\"12\"");
    svgdoc.rect(140, ly, 14, 14, "class=\"legend\" " + fill(kStageSecond));
    svgdoc.text(160, ly + 12, layer.categories.second, "font-family=\"sans-serif\" font-size=\"12\"");
  }
  svgdoc.rect(380, ly, 14, 14, "class=\"legend\" " + fill(kNeutral));
  svgdoc.text(400, ly + 12, "missing", "font-family=\"sans-serif\" font-size=\"12\"");
  out.svg = svgdoc.str();
  return out;
}

svg::PlotFrame scatter_frame(std::span<const double> x, std::span<const double> y, const ScatterLayers& layers) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  auto grow_x = [&](double v) {
    if (std::isfinite(v)) x_lo = std::min(x_lo, v), x_hi = std::max(x_hi, v);
  };
  auto grow_y = [&](double v) {
    if (std::isfinite(v)) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  };
  for (double v : x) grow_x(v);
  for (double v : y) grow_y(v);
  for (const auto& [mx, my] : layers.group_means) grow_x(mx), grow_y(my);
  for (const auto& g : layers.x_boxes) {
    grow_x(g.stats.whisker_lo), grow_x(g.stats.whisker_hi);
    for (double o : g.stats.outliers) grow_x(o);
  }
  if (layers.y_box) {
    grow_y(layers.y_box->whisker_lo), grow_y(layers.y_box->whisker_hi);
    for (double o : layers.y_box->outliers) grow_y(o);
  }
  if (layers.x_cut) grow_x(*layers.x_cut);
  if (layers.y_cut) grow_y(*layers.y_cut);
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
  if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
  const auto [xa, xb] = svg::padded_range(x_lo, x_hi);
  const auto [ya, yb] = svg::padded_range(y_lo, y_hi);
  const double top = 60.0 + 22.0 * static_cast<double>(layers.x_boxes.size());
  return svg::PlotFrame{120, top, 640, 440, xa, xb, ya, yb};
}

std::string emit_scatter_with_layers(std::span<const double> x, std::span<const double> y,
                                     const ScatterLayers& layers) {
  if (x.size() != y.size()) {
    throw EmissionError("scatter x and y differ in length (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
  }
  const auto f = scatter_frame(x, y, layers);
  svg::Document doc(860, f.top + f.height + 70);
  doc.text(f.left, 30, layers.title, "font-family=\"sans-serif\" font-size=\"16\" font-weight=\"bold\"");

  for (std::size_t i = 0; i < layers.x_boxes.size(); ++i) {
    horizontal_box(doc, f, layers.x_boxes[i].stats, 60.0 + 22.0 * static_cast<double>(i) + 2.0, 7,
                   layers.x_boxes[i].label);
  }
  if (layers.y_box) vertical_box(doc, f, *layers.y_box, f.left + f.width + 40, 10);

  doc.axes(f, layers.x_label, layers.y_label);

  doc.open_group("class=\"cuts\" stroke=\"#636363\" stroke-dasharray=\"6 4\"");
  if (layers.x_cut) doc.line(f.px(*layers.x_cut), f.top, f.px(*layers.x_cut), f.top + f.height, "class=\"cut\"");
  if (layers.y_cut) doc.line(f.left, f.py(*layers.y_cut), f.left + f.width, f.py(*layers.y_cut), "class=\"cut\"");
  doc.close_group();

  doc.open_group("class=\"points\" fill=\"#fdae61\" stroke=\"#333\" stroke-width=\"0.6\"");
  for (std::size_t i = 0; i < x.size(); ++i) doc.circle(f.px(x[i]), f.py(y[i]), 4, "class=\"point\"");
  doc.close_group();

  for (const auto& [mx, my] : layers.group_means) plus_mark(doc, f.px(mx), f.py(my));

  if (layers.curve && !x.empty()) {
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    draw_curve(doc, f, *layers.curve, *mn, *mx);
  }
  return doc.str();
}

std::string emit_errorbar_chart(std::span<const MeanDiffResult> battery, std::string_view title) {
  if (battery.empty()) throw EmissionError("error-bar chart needs at least one tested variable");
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& r : battery) {
    lo = std::min(lo, r.ci_lo);
    hi = std::max(hi, r.ci_hi);
  }
  const auto [ya, yb] = svg::padded_range(lo, hi, 0.08);
  const double step = 44.0;
  svg::PlotFrame f{90, 50, step * static_cast<double>(battery.size()), 360, 0, 1, ya, yb};
  svg::Document doc(f.left + f.width + 40, f.top + f.height + 110);
  doc.text(f.left, 30, title.empty() ? "95% CI of standardized mean differences" : title,
           "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\"");
  doc.rect(f.left, f.top, f.width, f.height, "fill=\"none\" stroke=\"#000\"");
  for (double t : svg::ticks(ya, yb)) {
    doc.line(f.left - 5, f.py(t), f.left, f.py(t), "stroke=\"#000\"");
    doc.text(f.left - 8, f.py(t) + 4, svg::tick_label(t),
             "font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\"");
  }
  doc.line(f.left, f.py(0.0), f.left + f.width, f.py(0.0), "class=\"zero-line\" stroke=\"#000\" stroke-width=\"1.2\"");

  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& r = battery[i];
    const double cx = f.left + (static_cast<double>(i) + 0.5) * step;
    const std::string colour = r.significant ? "#D7191C" : "#525252";
    doc.open_group("class=\"variable\" data-name=\"" + svg::escape(r.variable) + "\" data-significant=\"" +
                   (r.significant ? "true" : "false") + "\"");
    doc.line(cx, f.py(r.ci_lo), cx, f.py(r.ci_hi), "class=\"bar\" stroke=\"" + colour + "\" stroke-width=\"2\"");
    doc.line(cx - 6, f.py(r.ci_lo), cx + 6, f.py(r.ci_lo), "stroke=\"" + colour + "\"");
    doc.line(cx - 6, f.py(r.ci_hi), cx + 6, f.py(r.ci_hi), "stroke=\"" + colour + "\"");
    doc.circle(cx, f.py(r.diff), 3.5, "class=\"diff\" fill=\"" + colour + "\"");
    const double ty = f.top + f.height + 14;
    doc.text(cx, ty, r.variable,
             std::string("class=\"label\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\"") +
                 (r.significant ? " font-weight=\"bold\"" : "") + " transform=\"rotate(-60 " + svg::fmt(cx) + " " +
                 svg::fmt(ty) + ")\"");
    doc.close_group();
  }
  return doc.str();
}

std::string emit_boxplots(std::span<const GroupBox> groups, std::span<const double> positions,
                          std::string_view x_label, std::string_view y_label, const std::optional<FitResult>& curve) {
  if (groups.empty()) throw EmissionError("boxplot chart needs at least one group");
  if (groups.size() != positions.size()) throw EmissionError("boxplot groups and positions differ in length");
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& g : groups) {
    y_lo = std::min({y_lo, g.stats.whisker_lo, g.stats.outliers.empty() ? y_lo : g.stats.outliers.front()});
    y_hi = std::max({y_hi, g.stats.whisker_hi, g.stats.outliers.empty() ? y_hi : g.stats.outliers.back()});
  }
  const auto [mn, mx] = std::minmax_element(positions.begin(), positions.end());
  const auto [xa, xb] = svg::padded_range(*mn - 0.5, *mx + 0.5, 0.0);
  const auto [ya, yb] = svg::padded_range(y_lo, y_hi);
  svg::PlotFrame f{100, 40, 560, 400, xa, xb, ya, yb};
  svg::Document doc(720, 520);
  doc.axes(f, x_label, y_label);
  const double half = std::min(20.0, 0.3 * f.width / static_cast<double>(groups.size()));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    vertical_box(doc, f, groups[i].stats, f.px(positions[i]), half);
    doc.text(f.px(positions[i]), f.top - 6, groups[i].label + " (n=" + std::to_string(groups[i].stats.n) + ")",
             "font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\"");
  }
  if (curve) draw_curve(doc, f, *curve, *mn, *mx);
  return doc.str();
}

}  // namespace netspread
