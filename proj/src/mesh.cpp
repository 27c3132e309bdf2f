// SPDX-License-Identifier: Apache-2.0

#include "mpt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <Eigen/Dense>
#include "mpt/errors.hpp"

namespace mpt
{

namespace
{

std::uint64_t EdgeKey(int a, int b)
{
  if (a > b)
  {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double SignedVolumeOf(const Vec3 &a, const Vec3 &b, const Vec3 &c, const Vec3 &d)
{
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

}  // namespace

//
// MaterialTable
//

MaterialTable::MaterialTable()
{
  table_[kExteriorTag] = Material{kExteriorTag, 1.0, 0.0, false};
}

void MaterialTable::Add(const Material &m)
{
  if (m.tag.empty())
  {
    throw ConfigError("material tag must not be empty");
  }
  if (m.tag == kExteriorTag)
  {
    if (m.mu_r != 1.0 || m.sigma_star != 0.0)
    {
      throw ConfigError("the exterior region must have mu_r = 1 and sigma = 0");
    }
    return;
  }
  if (!(m.mu_r > 0.0) || !std::isfinite(m.mu_r))
  {
    throw ConfigError("material '" + m.tag + "': mu_r must be positive");
  }
  if (!(m.sigma_star >= 0.0) || !std::isfinite(m.sigma_star))
  {
    throw ConfigError("material '" + m.tag + "': sigma must be non-negative");
  }
  Material copy = m;
  copy.is_object = true;
  table_[m.tag] = copy;
}

const Material &MaterialTable::Get(const std::string &tag) const
{
  auto it = table_.find(tag);
  if (it == table_.end())
  {
    throw ConfigError("no material declared for region '" + tag + "'");
  }
  return it->second;
}

MaterialTable MaterialTable::WithScaledConductivity(double s) const
{
  MaterialTable out;
  for (const auto &[tag, m] : table_)
  {
    if (m.is_object)
    {
      Material scaled = m;
      scaled.sigma_star *= s;
      out.Add(scaled);
    }
  }
  return out;
}

//
// Mesh
//

int Mesh::RegionIndex(const std::string &tag)
{
  if (auto idx = FindRegion(tag))
  {
    return *idx;
  }
  region_names.push_back(tag);
  return static_cast<int>(region_names.size()) - 1;
}

std::optional<int> Mesh::FindRegion(const std::string &tag) const
{
  for (std::size_t i = 0; i < region_names.size(); i++)
  {
    if (region_names[i] == tag)
    {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

double Mesh::SignedVolume(int tet) const
{
  const auto &t = tets[tet];
  return SignedVolumeOf(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
}

Vec3 Mesh::Centroid(int tet) const
{
  const auto &t = tets[tet];
  return 0.25 * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]] + vertices[t[3]]);
}

double Mesh::TotalVolume() const
{
  double v = 0.0;
  for (int t = 0; t < NumTets(); t++)
  {
    v += SignedVolume(t);
  }
  return v;
}

double Mesh::RegionVolume(const std::string &tag) const
{
  auto idx = FindRegion(tag);
  if (!idx)
  {
    return 0.0;
  }
  double v = 0.0;
  for (int t = 0; t < NumTets(); t++)
  {
    if (tet_region[t] == *idx)
    {
      v += SignedVolume(t);
    }
  }
  return v;
}

void Mesh::Finalize()
{
  if (tet_region.size() != tets.size())
  {
    throw MeshError("tet region list does not match tet count");
  }
  const int nv = NumVertices();
  for (int t = 0; t < NumTets(); t++)
  {
    for (int k = 0; k < 4; k++)
    {
      if (tets[t][k] < 0 || tets[t][k] >= nv)
      {
        throw MeshError("tet " + std::to_string(t) + " references a missing vertex");
      }
    }
    if (tet_region[t] < 0 || tet_region[t] >= static_cast<int>(region_names.size()))
    {
      throw MeshError("tet " + std::to_string(t) + " has an undeclared region");
    }
    if (!(SignedVolume(t) > 0.0))
    {
      throw MeshError("tet " + std::to_string(t) + " has non-positive volume");
    }
  }

  // Edges numbered in order of first appearance.
  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(tets.size() * 2);
  edges.clear();
  tet_edges.assign(tets.size(), {});
  for (int t = 0; t < NumTets(); t++)
  {
    for (int k = 0; k < 6; k++)
    {
      int a = tets[t][kTetEdge[k][0]], b = tets[t][kTetEdge[k][1]];
      auto [it, inserted] = edge_index.try_emplace(EdgeKey(a, b), NumEdges());
      if (inserted)
      {
        edges.push_back({std::min(a, b), std::max(a, b)});
      }
      tet_edges[t][k] = it->second;
    }
  }

  // Faces seen once are on the boundary; more than twice means a broken mesh.
  std::map<std::array<int, 3>, int> face_count;
  for (int t = 0; t < NumTets(); t++)
  {
    for (int skip = 0; skip < 4; skip++)
    {
      std::array<int, 3> f;
      int n = 0;
      for (int k = 0; k < 4; k++)
      {
        if (k != skip)
        {
          f[n++] = tets[t][k];
        }
      }
      std::sort(f.begin(), f.end());
      if (++face_count[f] > 2)
      {
        throw MeshError("face shared by more than two tets (tet " + std::to_string(t) + ")");
      }
    }
  }
  boundary_faces.clear();
  for (const auto &[f, count] : face_count)
  {
    if (count == 1)
    {
      boundary_faces.push_back(f);
    }
  }
}

//
// Generation
//

Mesh GenerateBoxMesh(double half_width, int n)
{
  if (n < 1)
  {
    throw ConfigError("divisions per axis must be at least 1");
  }
  if (!(half_width > 0.0))
  {
    throw ConfigError("half width must be positive");
  }
  Mesh mesh;
  const int np = n + 1;
  const double h = 2.0 * half_width / n;
  mesh.vertices.reserve(static_cast<std::size_t>(np) * np * np);
  for (int k = 0; k < np; k++)
  {
    for (int j = 0; j < np; j++)
    {
      for (int i = 0; i < np; i++)
      {
        // Keep the outer planes exactly at +-half_width.
        auto coord = [&](int m) { return m == n ? half_width : -half_width + m * h; };
        mesh.vertices.emplace_back(coord(i), coord(j), coord(k));
      }
    }
  }
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };

  // Kuhn split: one tet per axis permutation, all sharing the main cell diagonal.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; k++)
  {
    for (int j = 0; j < n; j++)
    {
      for (int i = 0; i < n; i++)
      {
        for (const auto &p : perms)
        {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet;
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; s++)
          {
            c[p[s]]++;
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          mesh.tets.push_back(tet);
        }
      }
    }
  }
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    if (mesh.SignedVolume(t) < 0.0)
    {
      std::swap(mesh.tets[t][2], mesh.tets[t][3]);
    }
  }
  mesh.tet_region.assign(mesh.tets.size(), 0);
  mesh.Finalize();
  return mesh;
}

//
// Shapes and tagging
//

bool Contains(const Shape &shape, const Vec3 &p)
{
  struct Visitor
  {
    const Vec3 &p;
    bool operator()(const Sphere &s) const { return (p - s.center).norm() <= s.radius; }
    bool operator()(const Box &b) const
    {
      return (p.array() >= b.min.array()).all() && (p.array() <= b.max.array()).all();
    }
    bool operator()(const Tetrahedron &t) const
    {
      // Barycentric coordinates all non-negative.
      Eigen::Matrix3d J;
      J << t.v[1] - t.v[0], t.v[2] - t.v[0], t.v[3] - t.v[0];
      Vec3 l = J.fullPivLu().solve(p - t.v[0]);
      const double tol = 1e-12;
      return l.minCoeff() >= -tol && l.sum() <= 1.0 + tol;
    }
  };
  return std::visit(Visitor{p}, shape);
}

std::pair<Vec3, Vec3> BoundingBox(const Shape &shape)
{
  struct Visitor
  {
    std::pair<Vec3, Vec3> operator()(const Sphere &s) const
    {
      return {s.center.array() - s.radius, s.center.array() + s.radius};
    }
    std::pair<Vec3, Vec3> operator()(const Box &b) const { return {b.min, b.max}; }
    std::pair<Vec3, Vec3> operator()(const Tetrahedron &t) const
    {
      Vec3 lo = t.v[0], hi = t.v[0];
      for (const auto &v : t.v)
      {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      return {lo, hi};
    }
  };
  return std::visit(Visitor{}, shape);
}

double ShapeVolume(const Shape &shape)
{
  struct Visitor
  {
    double operator()(const Sphere &s) const
    {
      return 4.0 * M_PI / 3.0 * s.radius * s.radius * s.radius;
    }
    double operator()(const Box &b) const { return (b.max - b.min).prod(); }
    double operator()(const Tetrahedron &t) const
    {
      return std::abs(SignedVolumeOf(t.v[0], t.v[1], t.v[2], t.v[3]));
    }
  };
  return std::visit(Visitor{}, shape);
}

Mesh TagRegions(Mesh mesh, const std::vector<TaggedShape> &shapes)
{
  std::vector<int> shape_region;
  for (const auto &s : shapes)
  {
    if (s.tag.empty() || s.tag == kExteriorTag)
    {
      throw ConfigError("shape tag must name an object region");
    }
    shape_region.push_back(mesh.RegionIndex(s.tag));
  }
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    const Vec3 c = mesh.Centroid(t);
    int region = 0;
    for (std::size_t s = 0; s < shapes.size(); s++)
    {
      if (Contains(shapes[s].shape, c))
      {
        if (region != 0 && region != shape_region[s])
        {
          throw ConfigError("shapes tagged '" + mesh.region_names[region] + "' and '" +
                            shapes[s].tag + "' overlap at tet " + std::to_string(t));
        }
        region = shape_region[s];
      }
    }
    mesh.tet_region[t] = region;
  }
  return mesh;
}

//
// Red-green refinement
//

namespace
{

class RedGreenRefiner
{
public:
  explicit RedGreenRefiner(Mesh &mesh) : mesh_(mesh)
  {
    for (int t = 0; t < mesh.NumTets(); t++)
    {
      cells_.push_back({mesh.tets[t], mesh.tet_region[t], -1, true});
    }
  }

  void RefineLevel(const Vec3 &lo, const Vec3 &hi)
  {
    std::unordered_map<std::uint64_t, char> marked;
    const std::size_t ncells = cells_.size();
    for (std::size_t c = 0; c < ncells; c++)
    {
      if (cells_[c].alive && Touches(cells_[c].v, lo, hi))
      {
        int target = static_cast<int>(c);
        if (cells_[c].family >= 0)
        {
          target = RevertFamily(cells_[c].family);
        }
        MarkAll(cells_[target].v, marked);
      }
    }
    // Red children of a reverted green parent may carry marked sub-edges, so repeat
    // closure and subdivision until no live cell has a marked edge.
    while (Close(marked))
    {
      Subdivide(marked);
    }
  }

  void Write()
  {
    mesh_.tets.clear();
    mesh_.tet_region.clear();
    for (const auto &c : cells_)
    {
      if (c.alive)
      {
        mesh_.tets.push_back(c.v);
        mesh_.tet_region.push_back(c.region);
      }
    }
  }

private:
  struct Cell
  {
    std::array<int, 4> v;
    int region;
    int family;  // green family index, -1 for regular cells
    bool alive;
  };
  struct Family
  {
    std::array<int, 4> parent;
    int region;
    std::vector<int> children;
  };

  bool Touches(const std::array<int, 4> &v, const Vec3 &lo, const Vec3 &hi) const
  {
    Vec3 a = mesh_.vertices[v[0]], b = a;
    double hmax = 0.0;
    for (int k = 0; k < 4; k++)
    {
      a = a.cwiseMin(mesh_.vertices[v[k]]);
      b = b.cwiseMax(mesh_.vertices[v[k]]);
    }
    for (const auto &e : kTetEdge)
    {
      hmax = std::max(hmax, (mesh_.vertices[v[e[0]]] - mesh_.vertices[v[e[1]]]).norm());
    }
    // One-cell halo at the local cell size (the cube edge of a Kuhn tet is its longest
    // edge over sqrt(3)).
    const double halo = hmax / std::sqrt(3.0);
    return (a.array() <= hi.array() + halo).all() && (b.array() >= lo.array() - halo).all();
  }

  static void MarkAll(const std::array<int, 4> &v,
                      std::unordered_map<std::uint64_t, char> &marked)
  {
    for (const auto &e : kTetEdge)
    {
      marked[EdgeKey(v[e[0]], v[e[1]])] = 1;
    }
  }

  static int MarkedMask(const std::array<int, 4> &v,
                        const std::unordered_map<std::uint64_t, char> &marked)
  {
    int mask = 0;
    for (int k = 0; k < 6; k++)
    {
      if (marked.count(EdgeKey(v[kTetEdge[k][0]], v[kTetEdge[k][1]])))
      {
        mask |= 1 << k;
      }
    }
    return mask;
  }

  // Patterns handled by green bisection: one edge, two edges sharing a vertex, or the
  // three edges of one face.
  static bool IsGreen(int mask)
  {
    const int count = __builtin_popcount(mask);
    if (count == 1)
    {
      return true;
    }
    if (count == 2)
    {
      // Opposite edge pairs: (0,5), (1,4), (2,3).
      return mask != 0b100001 && mask != 0b010010 && mask != 0b001100;
    }
    if (count == 3)
    {
      // Faces opposite local vertices 3, 2, 1, 0.
      return mask == 0b001011 || mask == 0b010101 || mask == 0b100110 || mask == 0b111000;
    }
    return false;
  }

  int RevertFamily(int f)
  {
    for (int c : families_[f].children)
    {
      cells_[c].alive = false;
    }
    cells_.push_back({families_[f].parent, families_[f].region, -1, true});
    families_[f].children.clear();
    return static_cast<int>(cells_.size()) - 1;
  }

  // Returns true when some live cell has a marked edge.
  bool Close(std::unordered_map<std::uint64_t, char> &marked)
  {
    bool changed = true, any = false;
    while (changed)
    {
      changed = false;
      any = false;
      for (std::size_t c = 0; c < cells_.size(); c++)
      {
        if (!cells_[c].alive)
        {
          continue;
        }
        const int mask = MarkedMask(cells_[c].v, marked);
        if (mask == 0)
        {
          continue;
        }
        any = true;
        if (cells_[c].family >= 0)
        {
          // Green cells are never split again: restore the parent and refine it red.
          int parent = RevertFamily(cells_[c].family);
          MarkAll(cells_[parent].v, marked);
          changed = true;
          continue;
        }
        if (mask != 0b111111 && !IsGreen(mask))
        {
          MarkAll(cells_[c].v, marked);
          changed = true;
        }
      }
    }
    return any;
  }

  int Midpoint(int a, int b)
  {
    auto [it, inserted] = midpoints_.try_emplace(EdgeKey(a, b), mesh_.NumVertices());
    if (inserted)
    {
      mesh_.vertices.push_back(0.5 * (mesh_.vertices[a] + mesh_.vertices[b]));
    }
    return it->second;
  }

  void AddCell(std::array<int, 4> v, int region, int family)
  {
    if (SignedVolumeOf(mesh_.vertices[v[0]], mesh_.vertices[v[1]], mesh_.vertices[v[2]],
                       mesh_.vertices[v[3]]) < 0.0)
    {
      std::swap(v[2], v[3]);
    }
    cells_.push_back({v, region, family, true});
    if (family >= 0)
    {
      families_[family].children.push_back(static_cast<int>(cells_.size()) - 1);
    }
  }

  void Subdivide(const std::unordered_map<std::uint64_t, char> &marked)
  {
    const std::size_t ncells = cells_.size();
    for (std::size_t c = 0; c < ncells; c++)
    {
      if (!cells_[c].alive)
      {
        continue;
      }
      const int mask = MarkedMask(cells_[c].v, marked);
      if (mask == 0)
      {
        continue;
      }
      const auto v = cells_[c].v;
      const int region = cells_[c].region;
      cells_[c].alive = false;
      if (mask == 0b111111)
      {
        Red(v, region);
      }
      else
      {
        families_.push_back({v, region, {}});
        Green(v, region, mask, static_cast<int>(families_.size()) - 1);
      }
    }
  }

  void Red(const std::array<int, 4> &v, int region)
  {
    int m[4][4];
    for (const auto &e : kTetEdge)
    {
      m[e[0]][e[1]] = m[e[1]][e[0]] = Midpoint(v[e[0]], v[e[1]]);
    }
    AddCell({v[0], m[0][1], m[0][2], m[0][3]}, region, -1);
    AddCell({m[0][1], v[1], m[1][2], m[1][3]}, region, -1);
    AddCell({m[0][2], m[1][2], v[2], m[2][3]}, region, -1);
    AddCell({m[0][3], m[1][3], m[2][3], v[3]}, region, -1);

    // Inner octahedron split along its shortest diagonal.
    const std::array<std::array<int, 2>, 3> diag{
        {{m[0][1], m[2][3]}, {m[0][2], m[1][3]}, {m[0][3], m[1][2]}}};
    int best = 0;
    double best_len = 0.0;
    for (int d = 0; d < 3; d++)
    {
      double len = (mesh_.vertices[diag[d][0]] - mesh_.vertices[diag[d][1]]).norm();
      if (d == 0 || len < best_len - 1e-14 * len)
      {
        best = d;
        best_len = len;
      }
    }
    const auto &p = diag[(best + 1) % 3];
    const auto &q = diag[(best + 2) % 3];
    const std::array<int, 4> ring{p[0], q[0], p[1], q[1]};
    for (int k = 0; k < 4; k++)
    {
      AddCell({diag[best][0], diag[best][1], ring[k], ring[(k + 1) % 4]}, region, -1);
    }
  }

  void Green(const std::array<int, 4> &v, int region, int mask, int family)
  {
    std::vector<int> e;
    for (int k = 0; k < 6; k++)
    {
      if (mask & (1 << k))
      {
        e.push_back(k);
      }
    }
    if (e.size() == 1)
    {
      const int a = v[kTetEdge[e[0]][0]], b = v[kTetEdge[e[0]][1]];
      std::array<int, 2> rest;
      int n = 0;
      for (int k = 0; k < 4; k++)
      {
        if (v[k] != a && v[k] != b)
        {
          rest[n++] = v[k];
        }
      }
      const int mid = Midpoint(a, b);
      AddCell({a, mid, rest[0], rest[1]}, region, family);
      AddCell({mid, b, rest[0], rest[1]}, region, family);
      return;
    }
    if (e.size() == 2)
    {
      // Shared vertex a, edges a-b and a-c, apex d.
      const int e0a = v[kTetEdge[e[0]][0]], e0b = v[kTetEdge[e[0]][1]];
      const int e1a = v[kTetEdge[e[1]][0]], e1b = v[kTetEdge[e[1]][1]];
      const int a = (e0a == e1a || e0a == e1b) ? e0a : e0b;
      const int b = (e0a == a) ? e0b : e0a;
      const int c = (e1a == a) ? e1b : e1a;
      int d = -1;
      for (int k = 0; k < 4; k++)
      {
        if (v[k] != a && v[k] != b && v[k] != c)
        {
          d = v[k];
        }
      }
      const int mab = Midpoint(a, b), mac = Midpoint(a, c);
      AddCell({a, mab, mac, d}, region, family);
      // The quad's diagonal depends only on the face's vertex numbers so both tets
      // sharing the face split it the same way.
      if (b < c)
      {
        AddCell({mab, b, mac, d}, region, family);
        AddCell({b, c, mac, d}, region, family);
      }
      else
      {
        AddCell({mab, b, c, d}, region, family);
        AddCell({mab, c, mac, d}, region, family);
      }
      return;
    }
    // Three edges of one face.
    int d = -1;
    std::array<int, 3> f;
    int n = 0;
    for (int k = 0; k < 4; k++)
    {
      bool on_face = false;
      for (int k2 : e)
      {
        on_face = on_face || kTetEdge[k2][0] == k || kTetEdge[k2][1] == k;
      }
      if (on_face)
      {
        f[n++] = v[k];
      }
      else
      {
        d = v[k];
      }
    }
    const int m01 = Midpoint(f[0], f[1]), m02 = Midpoint(f[0], f[2]),
              m12 = Midpoint(f[1], f[2]);
    AddCell({f[0], m01, m02, d}, region, family);
    AddCell({f[1], m01, m12, d}, region, family);
    AddCell({f[2], m02, m12, d}, region, family);
    AddCell({m01, m12, m02, d}, region, family);
  }

  Mesh &mesh_;
  std::vector<Cell> cells_;
  std::vector<Family> families_;
  std::unordered_map<std::uint64_t, int> midpoints_;
};

}  // namespace

Mesh RefineTowardBox(Mesh mesh, const Vec3 &lo, const Vec3 &hi, int levels)
{
  if (levels < 0)
  {
    throw ConfigError("refinement levels must be non-negative");
  }
  if (levels == 0)
  {
    return mesh;
  }
  RedGreenRefiner refiner(mesh);
  for (int l = 0; l < levels; l++)
  {
    refiner.RefineLevel(lo, hi);
  }
  refiner.Write();
  mesh.Finalize();
  return mesh;
}

Mesh RefineTowardObject(Mesh mesh, const std::vector<TaggedShape> &shapes, int levels)
{
  if (levels < 0)
  {
    throw ConfigError("refinement levels must be non-negative");
  }
  if (shapes.empty())
  {
    return mesh;
  }
  auto [lo, hi] = BoundingBox(shapes.front().shape);
  for (const auto &s : shapes)
  {
    auto [a, b] = BoundingBox(s.shape);
    lo = lo.cwiseMin(a);
    hi = hi.cwiseMax(b);
  }
  return RefineTowardBox(std::move(mesh), lo, hi, levels);
}

Mesh RefineTowardObject(Mesh mesh, int levels)
{
  bool found = false;
  Vec3 lo, hi;
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    if (mesh.tet_region[t] == 0)
    {
      continue;
    }
    for (int v : mesh.tets[t])
    {
      if (!found)
      {
        lo = hi = mesh.vertices[v];
        found = true;
      }
      lo = lo.cwiseMin(mesh.vertices[v]);
      hi = hi.cwiseMax(mesh.vertices[v]);
    }
  }
  if (levels < 0)
  {
    throw ConfigError("refinement levels must be non-negative");
  }
  if (!found)
  {
    return mesh;
  }
  return RefineTowardBox(std::move(mesh), lo, hi, levels);
}

//
// I/O
//

namespace
{

// Next non-empty line with comments stripped; returns false at end of input.
bool NextLine(std::istream &in, std::string &line, int &lineno)
{
  while (std::getline(in, line))
  {
    lineno++;
    if (auto hash = line.find('#'); hash != std::string::npos)
    {
      line.erase(hash);
    }
    if (line.find_first_not_of(" \t\r") != std::string::npos)
    {
      return true;
    }
  }
  return false;
}

[[noreturn]] void ParseFail(int lineno, const std::string &msg)
{
  throw ConfigError("mesh parse error at line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

Mesh ReadMesh(std::istream &in, const std::vector<std::string> &known_tags)
{
  Mesh mesh;
  std::string line;
  int lineno = 0;
  auto read_count = [&](const char *what) {
    if (!NextLine(in, line, lineno))
    {
      ParseFail(lineno, std::string("missing ") + what + " count");
    }
    std::istringstream ss(line);
    long n;
    std::string extra;
    if (!(ss >> n) || n < 0 || (ss >> extra))
    {
      ParseFail(lineno, std::string("expected ") + what + " count");
    }
    return static_cast<int>(n);
  };

  const int nv = read_count("vertex");
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; i++)
  {
    if (!NextLine(in, line, lineno))
    {
      ParseFail(lineno, "unexpected end of file in vertex list");
    }
    std::istringstream ss(line);
    double x, y, z;
    std::string extra;
    if (!(ss >> x >> y >> z) || (ss >> extra))
    {
      ParseFail(lineno, "expected 'x y z'");
    }
    mesh.vertices.emplace_back(x, y, z);
  }
  const int nt = read_count("tet");
  for (int i = 0; i < nt; i++)
  {
    if (!NextLine(in, line, lineno))
    {
      ParseFail(lineno, "unexpected end of file in tet list");
    }
    std::istringstream ss(line);
    std::array<long, 4> v;
    std::string tag, extra;
    if (!(ss >> v[0] >> v[1] >> v[2] >> v[3] >> tag) || (ss >> extra))
    {
      ParseFail(lineno, "expected 'v1 v2 v3 v4 tag'");
    }
    std::array<int, 4> tet;
    for (int k = 0; k < 4; k++)
    {
      if (v[k] < 1 || v[k] > nv)
      {
        ParseFail(lineno, "vertex index out of range");
      }
      tet[k] = static_cast<int>(v[k] - 1);
    }
    if (!known_tags.empty() && tag != kExteriorTag &&
        std::find(known_tags.begin(), known_tags.end(), tag) == known_tags.end())
    {
      throw MeshError("unknown region tag '" + tag + "' at line " + std::to_string(lineno));
    }
    mesh.tets.push_back(tet);
    mesh.tet_region.push_back(mesh.RegionIndex(tag));
  }
  if (NextLine(in, line, lineno))
  {
    ParseFail(lineno, "trailing content after tet list");
  }
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    if (!(mesh.SignedVolume(t) > 0.0))
    {
      throw MeshError("tet " + std::to_string(t + 1) + " is inverted or degenerate");
    }
  }
  mesh.Finalize();
  return mesh;
}

Mesh ReadMeshFile(const std::filesystem::path &path, const std::vector<std::string> &known_tags)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open mesh file " + path.string());
  }
  return ReadMesh(in, known_tags);
}

void WriteMesh(std::ostream &out, const Mesh &mesh)
{
  out << "# tetrahedral mesh: vertices then tets (1-based) with region tags\n";
  out << mesh.NumVertices() << "\n" << std::setprecision(17);
  for (const auto &v : mesh.vertices)
  {
    out << v.x() << " " << v.y() << " " << v.z() << "\n";
  }
  out << mesh.NumTets() << "\n";
  for (int t = 0; t < mesh.NumTets(); t++)
  {
    const auto &tet = mesh.tets[t];
    out << tet[0] + 1 << " " << tet[1] + 1 << " " << tet[2] + 1 << " " << tet[3] + 1 << " "
        << mesh.RegionOf(t) << "\n";
  }
}

void WriteMeshFile(const std::filesystem::path &path, const Mesh &mesh)
{
  std::ofstream out(path);
  if (!out)
  {
    throw ConfigError("cannot write mesh file " + path.string());
  }
  WriteMesh(out, mesh);
}

}  // namespace mpt
