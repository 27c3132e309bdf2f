// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_MESH_HPP
#define MPT_MESH_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>
#include <Eigen/Core>

namespace mpt
{

using Vec3 = Eigen::Vector3d;

inline constexpr const char *kExteriorTag = "exterior";

// Material data attached to a region tag. Coordinates are dimensionless (object scale),
// so only mu_r and sigma_star carry the physics.
struct Material
{
  std::string tag;
  double mu_r = 1.0;
  double sigma_star = 0.0;  // S/m
  bool is_object = false;
};

// Region tag -> material. The exterior tag is always present with mu_r = 1, sigma = 0.
class MaterialTable
{
public:
  MaterialTable();

  // Throws ConfigError on mu_r <= 0, sigma < 0 or an attempt to redefine the exterior.
  void Add(const Material &m);

  const Material &Get(const std::string &tag) const;
  bool Contains(const std::string &tag) const { return table_.count(tag) > 0; }
  const std::map<std::string, Material> &All() const { return table_; }

  // Same table with every object conductivity multiplied by s.
  MaterialTable WithScaledConductivity(double s) const;

private:
  std::map<std::string, Material> table_;
};

// Tetrahedral mesh of the truncated domain. Region index 0 is always the exterior.
//
// Edges are derived from the tets: each global edge is stored with ascending vertex
// indices, which fixes the orientation of the corresponding edge basis function.
struct Mesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<int> tet_region;
  std::vector<std::string> region_names{kExteriorTag};

  // Derived by Finalize().
  std::vector<std::array<int, 3>> boundary_faces;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 6>> tet_edges;

  int NumVertices() const { return static_cast<int>(vertices.size()); }
  int NumTets() const { return static_cast<int>(tets.size()); }
  int NumEdges() const { return static_cast<int>(edges.size()); }

  // Region index for a tag, adding it when absent.
  int RegionIndex(const std::string &tag);
  std::optional<int> FindRegion(const std::string &tag) const;
  const std::string &RegionOf(int tet) const { return region_names[tet_region[tet]]; }

  double SignedVolume(int tet) const;
  Vec3 Centroid(int tet) const;
  double TotalVolume() const;
  double RegionVolume(const std::string &tag) const;

  // Rebuild edges, tet->edge maps and boundary faces; check volumes and face matching.
  // Throws MeshError naming the first offending tet.
  void Finalize();
};

// Local edge k of a tet joins local vertices kTetEdge[k][0] and kTetEdge[k][1].
inline constexpr int kTetEdge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

// Structured [-h, h]^3 mesh, each hexahedral cell split into 6 Kuhn tets, all exterior.
Mesh GenerateBoxMesh(double half_width, int divisions_per_axis);

struct Sphere
{
  Vec3 center;
  double radius;
};
struct Box
{
  Vec3 min, max;
};
struct Tetrahedron
{
  std::array<Vec3, 4> v;
};
using Shape = std::variant<Sphere, Box, Tetrahedron>;

bool Contains(const Shape &shape, const Vec3 &p);
std::pair<Vec3, Vec3> BoundingBox(const Shape &shape);
double ShapeVolume(const Shape &shape);

struct TaggedShape
{
  Shape shape;
  std::string tag;
};

// Tag each tet whose centroid lies in a shape. Later shapes override earlier ones with the
// same tag; a centroid inside two shapes with different tags is an error. Tets outside
// every shape become exterior, so tagging twice gives the same result.
Mesh TagRegions(Mesh mesh, const std::vector<TaggedShape> &shapes);

// Red-refine (8 children) every tet meeting the box [lo, hi] widened by one local cell,
// `levels` times, closing the mesh with green bisection patterns after each level.
Mesh RefineTowardBox(Mesh mesh, const Vec3 &lo, const Vec3 &hi, int levels);

// As above, with the box taken from the shapes.
Mesh RefineTowardObject(Mesh mesh, const std::vector<TaggedShape> &shapes, int levels);

// As above, with the box taken from the tets currently tagged as non-exterior. A mesh with
// no object tets is returned unchanged.
Mesh RefineTowardObject(Mesh mesh, int levels);

// Neutral ASCII format: vertex count, "x y z" lines, tet count, "v1 v2 v3 v4 tag" lines
// (1-based). Blank lines are skipped and '#' starts a comment.
Mesh ReadMesh(std::istream &in, const std::vector<std::string> &known_tags = {});
Mesh ReadMeshFile(const std::filesystem::path &path,
                  const std::vector<std::string> &known_tags = {});
void WriteMesh(std::ostream &out, const Mesh &mesh);
void WriteMeshFile(const std::filesystem::path &path, const Mesh &mesh);

}  // namespace mpt

#endif  // MPT_MESH_HPP
