#include "bimsynth/mesh_blend.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bimsynth/error.h"
#include "text_io.h"

namespace bimsynth {

namespace fs = std::filesystem;

TriMesh merge_scene_meshes(const SemanticScene& scene,
                           std::vector<ClassId>* triangle_classes) {
  TriMesh out;
  if (triangle_classes) triangle_classes->clear();
  for (const auto& obj : scene.objects) {
    const auto base = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), obj.mesh.vertices.begin(),
                        obj.mesh.vertices.end());
    for (const auto& f : obj.mesh.faces) {
      out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
      if (triangle_classes) triangle_classes->push_back(obj.class_id);
    }
  }
  return out;
}

TexelLayout make_texel_layout(const TriMesh& mesh, double texels_per_meter) {
  if (!(texels_per_meter > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "texel density must be positive");
  }
  TexelLayout layout;
  layout.texels_per_meter = texels_per_meter;
  layout.offsets.push_back(0);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto [a, b, c] = mesh.triangle(f);
    const double longest =
        std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    const auto n = static_cast<std::uint32_t>(
        std::max(1.0, std::ceil(longest * texels_per_meter - 1e-9)));
    layout.subdivisions.push_back(n);
    const Vec3 du = (b - a) / n;
    const Vec3 dv = (c - a) / n;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; i + j < n; ++j) {
        // upright cell (i, j)
        layout.centers.push_back(a + (i + 1.0 / 3.0) * du + (j + 1.0 / 3.0) * dv);
        layout.triangle_of.push_back(static_cast<std::uint32_t>(f));
        if (i + j + 1 < n) {  // inverted cell sharing the hypotenuse
          layout.centers.push_back(a + (i + 2.0 / 3.0) * du +
                                   (j + 2.0 / 3.0) * dv);
          layout.triangle_of.push_back(static_cast<std::uint32_t>(f));
        }
      }
    }
    layout.offsets.push_back(layout.centers.size());
  }
  return layout;
}

ViewObservations project_view(const TriMesh& mesh, const TexelLayout& layout,
                              const TriangleBvh& bvh, const CameraPose& pose,
                              const LabelMap& labels) {
  const PinholeCamera cam(pose, labels.width(), labels.height());
  std::vector<Vec3> normals(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto [a, b, c] = mesh.triangle(f);
    normals[f] = triangle_normal(a, b, c);
  }
  ViewObservations votes;
  for (std::size_t t = 0; t < layout.texel_count(); ++t) {
    const Vec3& p = layout.centers[t];
    const Vec3 to_cam = cam.position() - p;
    const double dist = to_cam.norm();
    if (!(dist > 0.0)) continue;
    const Vec3 dir = to_cam / dist;
    const double cos_theta = normals[layout.triangle_of[t]].dot(dir);
    if (!(cos_theta > 0.0)) continue;  // back-facing or grazing: no vote
    const auto pixel = cam.project_to_pixel(p);
    if (!pixel) continue;
    const double eps = 1e-7 * (1.0 + p.cwiseAbs().maxCoeff());
    if (bvh.occluded({p, dir}, eps, dist - eps)) continue;
    votes.push_back({static_cast<std::uint32_t>(t),
                     labels.at(pixel->first, pixel->second), cos_theta});
  }
  return votes;
}

std::uint32_t SemanticMesh::observation_count(std::size_t texel) const {
  std::uint32_t n = 0;
  for (std::uint32_t v : votes[texel]) n += v;
  return n;
}

ClassId fused_class(const std::array<double, kNumClasses>& weight,
                    const std::array<std::uint32_t, kNumClasses>& votes) {
  int best = -1;
  for (int c = 0; c < kNumClasses; ++c) {
    if (votes[c] == 0) continue;
    if (best < 0 || weight[c] > weight[best] ||
        (weight[c] == weight[best] && votes[c] > votes[best])) {
      best = c;
    }
  }
  return best < 0 ? ClassId::kBackground : static_cast<ClassId>(best);
}

SemanticMesh fuse(const TriMesh& mesh, const TexelLayout& layout,
                  std::span<const ViewObservations> views) {
  if (views.empty()) {
    throw Error(ErrorCode::kEmptyInput, "fusion needs at least one view");
  }
  SemanticMesh sm;
  sm.mesh = mesh;
  sm.layout = layout;
  const std::size_t n = layout.texel_count();
  sm.weight.assign(n, {});
  sm.votes.assign(n, {});
  for (const auto& view : views) {
    for (const TexelVote& v : view) {
      if (v.texel >= n) {
        throw Error(ErrorCode::kInvalidArgument, "vote for unknown texel");
      }
      if (!(v.weight > 0.0)) continue;
      sm.weight[v.texel][index_of(v.class_id)] += v.weight;
      ++sm.votes[v.texel][index_of(v.class_id)];
    }
  }
  sm.fused.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    sm.fused[t] = fused_class(sm.weight[t], sm.votes[t]);
  }
  return sm;
}

BlendScore score_blend(const SemanticMesh& sm,
                       std::span<const ViewObservations> views,
                       const std::vector<ClassId>& triangle_truth) {
  if (triangle_truth.size() != sm.mesh.faces.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one ground-truth class per triangle is required");
  }
  BlendScore score;
  std::size_t correct = 0;
  for (std::size_t t = 0; t < sm.fused.size(); ++t) {
    if (sm.observation_count(t) == 0) continue;
    ++score.observed_texels;
    if (sm.fused[t] == triangle_truth[sm.layout.triangle_of[t]]) ++correct;
  }
  if (score.observed_texels > 0) {
    score.fused_accuracy =
        static_cast<double>(correct) / static_cast<double>(score.observed_texels);
  }
  double sum = 0.0;
  int counted = 0;
  for (const auto& view : views) {
    std::size_t ok = 0, total = 0;
    for (const TexelVote& v : view) {
      if (!(v.weight > 0.0)) continue;
      ++total;
      if (v.class_id == triangle_truth[sm.layout.triangle_of[v.texel]]) ++ok;
    }
    if (total == 0) continue;
    sum += static_cast<double>(ok) / static_cast<double>(total);
    ++counted;
  }
  if (counted > 0) score.single_view_accuracy = sum / counted;
  return score;
}

void export_semantic_mesh(const SemanticMesh& sm, const ClassPalette& palette,
                          const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  write_mesh(sm.mesh, dir / (stem + ".obj"));
  std::size_t width = 1;
  for (std::size_t f = 0; f < sm.mesh.faces.size(); ++f) {
    width = std::max(width, sm.layout.texels_in(f));
  }
  Image atlas(static_cast<int>(width),
              static_cast<int>(std::max<std::size_t>(1, sm.mesh.faces.size())),
              palette.color(ClassId::kBackground));
  for (std::size_t f = 0; f < sm.mesh.faces.size(); ++f) {
    for (std::size_t k = 0; k < sm.layout.texels_in(f); ++k) {
      atlas.set(static_cast<int>(k), static_cast<int>(f),
                palette.color(sm.fused[sm.layout.offsets[f] + k]));
    }
  }
  write_png(atlas, dir / (stem + "_texels.png"));
  std::ostringstream side;
  side << "semantic_mesh 1\n"
       << "mesh " << stem << ".obj\n"
       << "texels " << stem << "_texels.png\n"
       << "texels_per_meter " << text::format_double(sm.layout.texels_per_meter)
       << '\n';
  text::write_file(dir / (stem + ".txt"), side.str());
}

ImportedSemanticMesh import_semantic_mesh(const fs::path& sidecar,
                                          const ClassPalette& palette) {
  std::istringstream in(text::read_file(sidecar));
  text::LineReader r(in, sidecar.string());
  std::string mesh_file, texel_file;
  double density = 0.0;
  text::Line line;
  while (r.next(line)) {
    const std::string& key = line.keyword();
    if (key == "semantic_mesh") {
      text::expect_arity(r, line, 2);
    } else if (key == "mesh") {
      text::expect_arity(r, line, 2);
      mesh_file = line.tokens[1];
    } else if (key == "texels") {
      text::expect_arity(r, line, 2);
      texel_file = line.tokens[1];
    } else if (key == "texels_per_meter") {
      text::expect_arity(r, line, 2);
      density = text::to_double(r, line, 1);
    } else {
      r.fail(line, "unknown key '" + key + "'");
    }
  }
  if (mesh_file.empty() || texel_file.empty() || !(density > 0.0)) {
    throw Error(ErrorCode::kParse, sidecar.string() + ": incomplete sidecar");
  }
  const fs::path dir = sidecar.parent_path();
  ImportedSemanticMesh out;
  out.mesh = read_mesh(dir / mesh_file);
  out.layout = make_texel_layout(out.mesh, density);
  const Image atlas = read_png(dir / texel_file);
  if (static_cast<std::size_t>(atlas.height()) < out.mesh.faces.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "texel atlas has too few rows");
  }
  out.fused.resize(out.layout.texel_count());
  for (std::size_t f = 0; f < out.mesh.faces.size(); ++f) {
    if (out.layout.texels_in(f) > static_cast<std::size_t>(atlas.width())) {
      throw Error(ErrorCode::kDimensionMismatch, "texel atlas row too short");
    }
    for (std::size_t k = 0; k < out.layout.texels_in(f); ++k) {
      out.fused[out.layout.offsets[f] + k] = palette.nearest(
          atlas.at(static_cast<int>(k), static_cast<int>(f)));
    }
  }
  return out;
}

}  // namespace bimsynth
