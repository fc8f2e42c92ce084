#include "catasym/space.hpp"

#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

namespace catasym {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

bool graph_connected(int n, const std::vector<GraphEdge>& edges) {
  if (n <= 0) return false;
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == n;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

SpaceDescriptor SpaceDescriptor::circle(double length) {
  require(length > 0.0, "circle length must be positive");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::Circle;
  s.length_ = length;
  return s;
}

SpaceDescriptor SpaceDescriptor::metric_graph(int vertex_count,
                                              std::vector<GraphEdge> edges) {
  require(vertex_count > 0, "graph needs at least one vertex");
  require(!edges.empty(), "graph needs at least one edge");
  for (const auto& e : edges) {
    require(e.u >= 0 && e.u < vertex_count && e.v >= 0 && e.v < vertex_count,
            "graph edge endpoint out of range");
    require(e.length > 0.0, "graph edge lengths must be strictly positive");
  }
  require(graph_connected(vertex_count, edges), "graph must be connected");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::MetricGraph;
  s.vertex_count_ = vertex_count;
  s.edges_ = std::move(edges);
  return s;
}

SpaceDescriptor SpaceDescriptor::suspension(SpaceDescriptor base) {
  require(base.composite_depth() < 2, "composite nesting depth exceeds 2");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::Suspension;
  s.base_ = std::make_shared<const SpaceDescriptor>(std::move(base));
  return s;
}

SpaceDescriptor SpaceDescriptor::euclidean_cone(SpaceDescriptor base) {
  require(base.composite_depth() < 2, "composite nesting depth exceeds 2");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::EuclideanCone;
  s.base_ = std::make_shared<const SpaceDescriptor>(std::move(base));
  return s;
}

SpaceDescriptor SpaceDescriptor::round_sphere(int dim) {
  require(dim >= 1, "sphere dimension must be >= 1");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::RoundSphere;
  s.dim_ = dim;
  return s;
}

SpaceDescriptor SpaceDescriptor::euclidean(int dim) {
  require(dim >= 1, "euclidean dimension must be >= 1");
  SpaceDescriptor s;
  s.kind_ = SpaceKind::Euclidean;
  s.dim_ = dim;
  return s;
}

double SpaceDescriptor::circle_length() const {
  require(kind_ == SpaceKind::Circle, "not a circle");
  return length_;
}

int SpaceDescriptor::vertex_count() const {
  require(kind_ == SpaceKind::MetricGraph, "not a graph");
  return vertex_count_;
}

const std::vector<GraphEdge>& SpaceDescriptor::edges() const {
  require(kind_ == SpaceKind::MetricGraph, "not a graph");
  return edges_;
}

const SpaceDescriptor& SpaceDescriptor::base() const {
  require(base_ != nullptr, "space has no base");
  return *base_;
}

int SpaceDescriptor::dim() const {
  require(kind_ == SpaceKind::RoundSphere || kind_ == SpaceKind::Euclidean,
          "space has no dimension parameter");
  return dim_;
}

bool SpaceDescriptor::bounded() const {
  switch (kind_) {
    case SpaceKind::Circle:
    case SpaceKind::MetricGraph:
    case SpaceKind::RoundSphere:
      return true;
    case SpaceKind::Suspension:
      return true;
    case SpaceKind::EuclideanCone:
    case SpaceKind::Euclidean:
      return false;
  }
  return false;
}

int SpaceDescriptor::composite_depth() const {
  if (kind_ == SpaceKind::Suspension || kind_ == SpaceKind::EuclideanCone)
    return 1 + base_->composite_depth();
  return 0;
}

std::string SpaceDescriptor::to_string() const {
  switch (kind_) {
    case SpaceKind::Circle:
      return "circle:" + format_double(length_);
    case SpaceKind::MetricGraph: {
      std::ostringstream os;
      os << "graph:v=" << vertex_count_ << ";e=";
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (i) os << ',';
        os << edges_[i].u << '-' << edges_[i].v << ':'
           << format_double(edges_[i].length);
      }
      return os.str();
    }
    case SpaceKind::Suspension:
      return "suspension(" + base_->to_string() + ")";
    case SpaceKind::EuclideanCone:
      return "cone(" + base_->to_string() + ")";
    case SpaceKind::RoundSphere:
      return "sphere:" + std::to_string(dim_);
    case SpaceKind::Euclidean:
      return "euclidean:" + std::to_string(dim_);
  }
  throw ContractViolation("unknown space kind");
}

SpaceDescriptor SpaceDescriptor::parse(const std::string& text) {
  const auto fail = [&]() -> SpaceDescriptor {
    throw ContractViolation("cannot parse space descriptor: " + text);
  };
  if (text.rfind("circle:", 0) == 0)
    return circle(std::stod(text.substr(7)));
  if (text.rfind("sphere:", 0) == 0)
    return round_sphere(std::stoi(text.substr(7)));
  if (text.rfind("euclidean:", 0) == 0)
    return euclidean(std::stoi(text.substr(10)));
  if (text.rfind("suspension(", 0) == 0 && text.back() == ')')
    return suspension(parse(text.substr(11, text.size() - 12)));
  if (text.rfind("cone(", 0) == 0 && text.back() == ')')
    return euclidean_cone(parse(text.substr(5, text.size() - 6)));
  if (text.rfind("graph:v=", 0) == 0) {
    const auto semi = text.find(";e=");
    if (semi == std::string::npos) return fail();
    const int n = std::stoi(text.substr(8, semi - 8));
    std::vector<GraphEdge> edges;
    std::string rest = text.substr(semi + 3);
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto dash = item.find('-');
      const auto colon = item.find(':', dash);
      if (dash == std::string::npos || colon == std::string::npos)
        return fail();
      GraphEdge e;
      e.u = std::stoi(item.substr(0, dash));
      e.v = std::stoi(item.substr(dash + 1, colon - dash - 1));
      e.length = std::stod(item.substr(colon + 1));
      edges.push_back(e);
    }
    return metric_graph(n, std::move(edges));
  }
  return fail();
}

bool SpaceDescriptor::operator==(const SpaceDescriptor& other) const {
  return to_string() == other.to_string();
}

ModelPoint ModelPoint::circle_angle(double angle) {
  ModelPoint p;
  p.kind = PointKind::Circle;
  p.a = angle;
  return p;
}

ModelPoint ModelPoint::graph_point(int edge, double offset) {
  ModelPoint p;
  p.kind = PointKind::Graph;
  p.edge = edge;
  p.offset = offset;
  return p;
}

ModelPoint ModelPoint::suspension_point(double polar, ModelPoint base_point) {
  ModelPoint p;
  p.kind = PointKind::Suspension;
  p.a = polar;
  p.base = std::make_shared<const ModelPoint>(std::move(base_point));
  return p;
}

ModelPoint ModelPoint::cone_point(double radius, ModelPoint base_point) {
  ModelPoint p;
  p.kind = PointKind::Cone;
  p.a = radius;
  p.base = std::make_shared<const ModelPoint>(std::move(base_point));
  return p;
}

ModelPoint ModelPoint::vector_point(std::vector<double> x) {
  ModelPoint p;
  p.kind = PointKind::Vector;
  p.coords = std::move(x);
  return p;
}

ModelPoint canonical_point(const SpaceDescriptor& space) {
  switch (space.kind()) {
    case SpaceKind::Circle:
      return ModelPoint::circle_angle(0.0);
    case SpaceKind::MetricGraph:
      return ModelPoint::graph_point(0, 0.0);
    case SpaceKind::Suspension:
      return ModelPoint::suspension_point(0.0, canonical_point(space.base()));
    case SpaceKind::EuclideanCone:
      return ModelPoint::cone_point(0.0, canonical_point(space.base()));
    case SpaceKind::RoundSphere: {
      std::vector<double> x(space.dim() + 1, 0.0);
      x[0] = 1.0;
      return ModelPoint::vector_point(std::move(x));
    }
    case SpaceKind::Euclidean:
      return ModelPoint::vector_point(std::vector<double>(space.dim(), 0.0));
  }
  throw ContractViolation("unknown space kind");
}

bool is_apex(const ModelPoint& p) {
  return p.kind == PointKind::Cone && p.a == 0.0;
}

ModelPoint normalize_point(const SpaceDescriptor& space, ModelPoint p) {
  switch (space.kind()) {
    case SpaceKind::Circle: {
      require(p.kind == PointKind::Circle, "point/space variant mismatch");
      const double L = space.circle_length();
      double a = std::fmod(p.a, L);
      if (a < 0.0) a += L;
      if (a == L) a = 0.0;
      p.a = a;
      return p;
    }
    case SpaceKind::MetricGraph: {
      require(p.kind == PointKind::Graph, "point/space variant mismatch");
      require(p.edge >= 0 &&
                  p.edge < static_cast<int>(space.edges().size()),
              "graph edge id out of range");
      const double len = space.edges()[p.edge].length;
      require(p.offset >= -kGeomTol && p.offset <= len + kGeomTol,
              "graph offset outside edge");
      p.offset = std::min(std::max(p.offset, 0.0), len);
      return p;
    }
    case SpaceKind::Suspension: {
      require(p.kind == PointKind::Suspension && p.base,
              "point/space variant mismatch");
      require(p.a >= -kGeomTol && p.a <= kPi + kGeomTol,
              "suspension polar distance outside [0, pi]");
      double s = std::min(std::max(p.a, 0.0), kPi);
      if (s == 0.0 || s == kPi) {
        return ModelPoint::suspension_point(s, canonical_point(space.base()));
      }
      return ModelPoint::suspension_point(
          s, normalize_point(space.base(), *p.base));
    }
    case SpaceKind::EuclideanCone: {
      require(p.kind == PointKind::Cone && p.base,
              "point/space variant mismatch");
      require(p.a >= 0.0, "cone radius must be nonnegative");
      if (p.a == 0.0) {
        return ModelPoint::cone_point(0.0, canonical_point(space.base()));
      }
      return ModelPoint::cone_point(p.a,
                                    normalize_point(space.base(), *p.base));
    }
    case SpaceKind::RoundSphere: {
      require(p.kind == PointKind::Vector, "point/space variant mismatch");
      require(static_cast<int>(p.coords.size()) == space.dim() + 1,
              "sphere coordinate size mismatch");
      double n2 = 0.0;
      for (double c : p.coords) n2 += c * c;
      require(n2 > 0.0, "sphere point must be a nonzero vector");
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : p.coords) c *= inv;
      return p;
    }
    case SpaceKind::Euclidean: {
      require(p.kind == PointKind::Vector, "point/space variant mismatch");
      require(static_cast<int>(p.coords.size()) == space.dim(),
              "euclidean coordinate size mismatch");
      return p;
    }
  }
  throw ContractViolation("unknown space kind");
}

void check_point(const SpaceDescriptor& space, const ModelPoint& p) {
  normalize_point(space, p);
}

}  // namespace catasym
