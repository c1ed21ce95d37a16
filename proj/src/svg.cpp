#include "nobeta/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace nobeta::svg {

namespace {

constexpr double kTwoPi = 6.283185307179586;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

void requirePlanar(const ConvexBody& P) {
  if (P.dim() != 2) throw InvalidArgument("SVG output needs a planar body");
}

const char* kStageColors[] = {"#d62728", "#ff7f0e", "#bcbd22", "#2ca02c", "#17becf", "#1f77b4", "#9467bd"};

}  // namespace

void Scene::grow(const Vec& p) {
  if (lo_.size() == 0) {
    lo_ = p;
    hi_ = p;
    return;
  }
  lo_ = lo_.cwiseMin(p);
  hi_ = hi_.cwiseMax(p);
}

void Scene::copy(const ConvexBody& P, const Homothet& h, const std::string& style) {
  requirePlanar(P);
  if (P.isBall()) {
    items_.push_back({Item::Kind::Circle, {h.center}, h.scale, style, ""});
    grow(h.center - Vec::Constant(2, h.scale));
    grow(h.center + Vec::Constant(2, h.scale));
    return;
  }
  Item it{Item::Kind::Polygon, {}, 0.0, style, ""};
  for (const Vec& v : P.vertices()) {
    it.pts.push_back(h.apply(v));
    grow(it.pts.back());
  }
  items_.push_back(std::move(it));
}

void Scene::point(const Vec& p, double radiusPx, const std::string& style) {
  items_.push_back({Item::Kind::Dot, {p}, radiusPx, style, ""});
  grow(p);
}

void Scene::segment(const Vec& a, const Vec& b, const std::string& style) {
  items_.push_back({Item::Kind::Line, {a, b}, 0.0, style, ""});
  grow(a);
  grow(b);
}

void Scene::label(const Vec& p, const std::string& text) {
  items_.push_back({Item::Kind::Text, {p}, 0.0, "", text});
}

std::string Scene::str() const {
  Vec lo = lo_.size() ? lo_ : Vec::Zero(2);
  Vec hi = hi_.size() ? hi_ : Vec::Ones(2);
  double span = std::max({hi(0) - lo(0), hi(1) - lo(1), 1e-12});
  double pad = 0.05 * span;
  double k = pixels_ / (span + 2 * pad);
  auto X = [&](double x) { return num((x - lo(0) + pad) * k); };
  auto Y = [&](double y) { return num((hi(1) + pad - y) * k); };
  double w = (hi(0) - lo(0) + 2 * pad) * k;
  double h = (hi(1) - lo(1) + 2 * pad) * k;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const Item& it : items_) {
    switch (it.kind) {
      case Item::Kind::Circle:
        os << "<circle cx=\"" << X(it.pts[0](0)) << "\" cy=\"" << Y(it.pts[0](1)) << "\" r=\"" << num(it.r * k)
           << "\" " << it.style << "/>\n";
        break;
      case Item::Kind::Polygon: {
        os << "<polygon points=\"";
        for (size_t i = 0; i < it.pts.size(); ++i)
          os << (i ? " " : "") << X(it.pts[i](0)) << "," << Y(it.pts[i](1));
        os << "\" " << it.style << "/>\n";
        break;
      }
      case Item::Kind::Dot:
        os << "<circle cx=\"" << X(it.pts[0](0)) << "\" cy=\"" << Y(it.pts[0](1)) << "\" r=\"" << num(it.r) << "\" "
           << it.style << "/>\n";
        break;
      case Item::Kind::Line:
        os << "<line x1=\"" << X(it.pts[0](0)) << "\" y1=\"" << Y(it.pts[0](1)) << "\" x2=\"" << X(it.pts[1](0))
           << "\" y2=\"" << Y(it.pts[1](1)) << "\" " << it.style << "/>\n";
        break;
      case Item::Kind::Text:
        os << "<text x=\"" << X(it.pts[0](0)) << "\" y=\"" << Y(it.pts[0](1))
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(it.text) << "</text>\n";
        break;
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string renderRun(const ConvexBody& P, const TargetSet& target, const RunRecord& rec) {
  requirePlanar(P);
  Scene sc;
  for (size_t i = 0; i < rec.moves.size(); ++i) {
    const Move& m = rec.moves[i];
    if (i % 2 == 0)
      sc.copy(P, m.copy(), "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.2\"");
    else
      sc.copy(P, m.copy(), "fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
  }
  std::set<int> alive(rec.survivors.begin(), rec.survivors.end());
  for (size_t i = 0; i < target.points.size(); ++i) {
    if (alive.count(static_cast<int>(i)))
      sc.point(target.points[i], 2.0, "fill=\"black\"");
    else
      sc.point(target.points[i], 2.0, "fill=\"none\" stroke=\"#999999\" stroke-width=\"0.6\"");
  }
  if (!rec.moves.empty()) {
    const Move& m0 = rec.moves[0];
    Vec corner = m0.center + m0.scale * Vec::Constant(2, 1.0);
    sc.label(corner, rec.pI + " vs " + rec.pII + ": " + statusName(rec.status));
  }
  return sc.str();
}

std::string renderGoodCopy(const ConvexBody& P, const TargetSet& target, const GoodCopyCertificate& cert) {
  requirePlanar(P);
  Scene sc;
  sc.copy(P, cert.copy, "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"");
  if (!cert.projected.empty())
    sc.copy(P, cert.cover, "fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"3,3\"");
  std::set<int> band(cert.band.begin(), cert.band.end());
  std::set<int> lim(cert.limitPoints.begin(), cert.limitPoints.end());
  for (size_t i = 0; i < target.points.size(); ++i) {
    int id = static_cast<int>(i);
    if (lim.count(id))
      sc.point(target.points[i], 2.5, "fill=\"#d62728\"");
    else if (band.count(id))
      sc.point(target.points[i], 2.0, "fill=\"#ff7f0e\"");
    else
      sc.point(target.points[i], 1.5, "fill=\"#777777\"");
  }
  for (const Vec& p : cert.projected) sc.point(p, 1.2, "fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"0.6\"");
  Vec corner = cert.copy.center + cert.copy.scale * Vec::Constant(2, 1.0);
  sc.label(corner, std::string(cert.good ? "good" : "not good") + " |B|=" + std::to_string(cert.limitPoints.size()));
  return sc.str();
}

std::string renderTrace(const ConvexBody& P, const TargetSet& target, const DerivativeTrace& trace) {
  requirePlanar(P);
  Scene sc;
  std::set<int> fix(trace.fixpoint.begin(), trace.fixpoint.end());
  const int palette = static_cast<int>(sizeof kStageColors / sizeof kStageColors[0]);
  for (size_t i = 0; i < target.points.size(); ++i) {
    int id = static_cast<int>(i);
    if (fix.count(id)) {
      sc.point(target.points[i], 2.0, "fill=\"black\"");
    } else {
      int s = i < trace.stageOf.size() ? trace.stageOf[i] : 0;
      sc.point(target.points[i], 2.0, std::string("fill=\"") + kStageColors[std::min(s, palette - 1)] + "\"");
    }
  }
  return sc.str();
}

}  // namespace nobeta::svg
