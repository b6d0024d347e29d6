#include "speclab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) { parent[x] = parent[parent[x]]; x = parent[x]; }
        return x;
    }
    void unite(int a, int b) {
        a = find(a); b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Assigns contiguous dof indices to glued vertex classes, in ascending order
// of the class representative (smallest raw index), and rewrites the
// identification in canonical vertex -> representative form so that applying
// the gluing twice is stable.
void finalize_dofs(DiscreteSurface& s) {
    UnionFind uf(s.vertex_count());
    for (auto [from, to] : s.identification) uf.unite(from, to);
    std::map<int, int> roots;
    for (int v = 0; v < s.vertex_count(); ++v) roots.emplace(uf.find(v), 0);
    int next = 0;
    for (auto& [root, idx] : roots) idx = next++;
    s.vertex_dof.resize(s.vertex_count());
    for (int v = 0; v < s.vertex_count(); ++v) s.vertex_dof[v] = roots[uf.find(v)];
    s.dof_count = next;
    s.identification.clear();
    for (int v = 0; v < s.vertex_count(); ++v) {
        int r = uf.find(v);
        if (r != v) s.identification.push_back({v, r});
    }
}

struct EdgeUse {
    int face;
    int slot; // 0,1,2: edge from corner slot to slot+1
};

std::map<std::pair<int, int>, std::vector<EdgeUse>> glued_edges(const DiscreteSurface& s) {
    std::map<std::pair<int, int>, std::vector<EdgeUse>> edges;
    for (int t = 0; t < s.triangle_count(); ++t) {
        for (int e = 0; e < 3; ++e) {
            int a = s.vertex_dof[s.triangles[t][e]];
            int b = s.vertex_dof[s.triangles[t][(e + 1) % 3]];
            if (a == b)
                throw NonManifoldEdge("triangle " + std::to_string(t) + " has a glued-degenerate edge");
            edges[{std::min(a, b), std::max(a, b)}].push_back({t, e});
        }
    }
    return edges;
}

// Propagates a consistent orientation across shared edges; false when the
// glued complex admits none.
bool propagate_orientation(const DiscreteSurface& s,
                           const std::map<std::pair<int, int>, std::vector<EdgeUse>>& edges) {
    const int nt = s.triangle_count();
    std::vector<int> orient(nt, 0);
    auto directed = [&](const EdgeUse& use, int flip) {
        int a = s.vertex_dof[s.triangles[use.face][use.slot]];
        int b = s.vertex_dof[s.triangles[use.face][(use.slot + 1) % 3]];
        return flip > 0 ? std::pair(a, b) : std::pair(b, a);
    };
    for (int start = 0; start < nt; ++start) {
        if (orient[start] != 0) continue;
        orient[start] = 1;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            int t = q.front(); q.pop();
            for (int e = 0; e < 3; ++e) {
                int a = s.vertex_dof[s.triangles[t][e]];
                int b = s.vertex_dof[s.triangles[t][(e + 1) % 3]];
                const auto& uses = edges.at({std::min(a, b), std::max(a, b)});
                for (const auto& other : uses) {
                    if (other.face == t && other.slot == e) continue;
                    // Compatible orientations traverse a shared edge in
                    // opposite directions.
                    auto mine = directed({t, e}, orient[t]);
                    int needed = 0;
                    auto fwd = directed(other, 1);
                    if (fwd.first == mine.second && fwd.second == mine.first) needed = 1;
                    else needed = -1;
                    if (orient[other.face] == 0) {
                        orient[other.face] = needed;
                        q.push(other.face);
                    } else if (orient[other.face] != needed) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// Boundary edges in glued space = edges with a single incident triangle.
void finalize_boundary_and_orientation(DiscreteSurface& s) {
    auto edges = glued_edges(s);
    s.boundary_edges.clear();
    for (const auto& [key, uses] : edges) {
        if (uses.size() > 2)
            throw NonManifoldEdge("edge with " + std::to_string(uses.size()) + " incident triangles");
        if (uses.size() == 1) {
            const auto& u = uses.front();
            int a = s.triangles[u.face][u.slot];
            int b = s.triangles[u.face][(u.slot + 1) % 3];
            s.boundary_edges.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(s.boundary_edges.begin(), s.boundary_edges.end());
    s.orientable = propagate_orientation(s, edges);
}

ClassTag closed_tag(const ConformalClassParam& p) { return ClassTag{p, false}; }

DiscreteSurface flat_quotient_mesh(const ConformalClassParam& param, int resolution) {
    if (resolution < 4) throw ResolutionTooSmall("flat classes need resolution >= 4");
    const double b = param.b;
    const double sb = std::sqrt(b);
    std::array<double, 2> e1{}, e2{};
    double width, height;
    if (param.kind == SurfaceClass::Torus) {
        e1 = {1.0 / sb, 0.0};
        e2 = {param.a / sb, sb};
        width = 1.0 / sb;
        height = sb;
    } else {
        e1 = {1.0 / sb, 0.0};
        e2 = {0.0, sb};
        width = 1.0 / sb;
        height = sb;
    }
    const int nx = std::max(4, static_cast<int>(std::llround(resolution * std::sqrt(width / height))));
    const int ny = std::max(4, static_cast<int>(std::llround(resolution * std::sqrt(height / width))));

    DiscreteSurface s;
    s.class_tag = closed_tag(param);
    s.dim = 2;
    auto vid = [&](int i, int j) { return i * (ny + 1) + j; };
    s.vertices.resize(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            double u = static_cast<double>(i) / nx, v = static_cast<double>(j) / ny;
            s.vertices[vid(i, j)] = {u * e1[0] + v * e2[0], u * e1[1] + v * e2[1], 0.0};
        }
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            s.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            s.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }

    if (param.kind == SurfaceClass::Torus) {
        for (int j = 0; j < ny; ++j) s.identification.push_back({vid(nx, j), vid(0, j)});
        for (int i = 0; i < nx; ++i) s.identification.push_back({vid(i, ny), vid(i, 0)});
        s.identification.push_back({vid(nx, ny), vid(0, 0)});
    } else {
        // (x, y + sqrt(b)) ~ (x, y) and (x + 1/sqrt(b), -y) ~ (x, y)
        for (int i = 0; i <= nx; ++i) s.identification.push_back({vid(i, ny), vid(i, 0)});
        for (int j = 0; j < ny; ++j) s.identification.push_back({vid(nx, j), vid(0, (ny - j) % ny)});
    }
    std::sort(s.identification.begin(), s.identification.end());
    finalize_dofs(s);
    finalize_boundary_and_orientation(s);
    return s;
}

struct IcoSphere {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;
    std::vector<int> antipode; // vertex pairing, exact by construction
};

std::array<double, 3> normalized(const std::array<double, 3>& v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

IcoSphere icosphere(int level) {
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    // antipodal pairs adjacent: antipode(v) = v ^ 1
    std::vector<std::array<double, 3>> raw = {
        {-1, p, 0},  {1, -p, 0},  {1, p, 0},   {-1, -p, 0}, {0, -1, p},  {0, 1, -p},
        {0, 1, p},   {0, -1, -p}, {p, 0, -1},  {-p, 0, 1},  {p, 0, 1},   {-p, 0, -1}};
    IcoSphere ico;
    for (auto& v : raw) ico.vertices.push_back(normalized(v));
    ico.antipode.resize(12);
    for (int i = 0; i < 12; ++i) ico.antipode[i] = i ^ 1;
    // standard icosahedron faces, re-indexed for the pairing above
    ico.faces = {{0, 9, 6},  {0, 6, 2},  {0, 2, 5},  {0, 5, 11}, {0, 11, 9}, {2, 6, 10},
                 {6, 9, 4},  {9, 11, 3}, {11, 5, 7}, {5, 2, 8},  {1, 10, 4}, {1, 4, 3},
                 {1, 3, 7},  {1, 7, 8},  {1, 8, 10}, {4, 10, 6}, {3, 4, 9},  {7, 3, 11},
                 {8, 7, 5},  {10, 8, 2}};

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::pair(std::min(i, j), std::max(i, j));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            // create the midpoint and its exact antipode together
            std::array<double, 3> m = {ico.vertices[i][0] + ico.vertices[j][0],
                                       ico.vertices[i][1] + ico.vertices[j][1],
                                       ico.vertices[i][2] + ico.vertices[j][2]};
            m = normalized(m);
            int vm = static_cast<int>(ico.vertices.size());
            ico.vertices.push_back(m);
            ico.vertices.push_back({-m[0], -m[1], -m[2]});
            ico.antipode.push_back(vm + 1);
            ico.antipode.push_back(vm);
            midpoint[key] = vm;
            auto akey = std::pair(std::min(ico.antipode[i], ico.antipode[j]),
                                  std::max(ico.antipode[i], ico.antipode[j]));
            midpoint[akey] = vm + 1;
            return vm;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(ico.faces.size() * 4);
        for (auto [i, j, k] : ico.faces) {
            int a = mid(i, j), b = mid(j, k), c = mid(k, i);
            next.push_back({i, a, c});
            next.push_back({a, j, b});
            next.push_back({c, b, k});
            next.push_back({a, b, c});
        }
        ico.faces = std::move(next);
    }
    return ico;
}

DiscreteSurface sphere_mesh(int level) {
    if (level < 1) throw ResolutionTooSmall("round classes need subdivision level >= 1");
    if (level > 8) throw ResolutionTooSmall("subdivision level capped at 8");
    IcoSphere ico = icosphere(level);
    DiscreteSurface s;
    s.class_tag = closed_tag(ConformalClassParam::sphere());
    s.dim = 3;
    s.vertices = std::move(ico.vertices);
    s.triangles = std::move(ico.faces);
    finalize_dofs(s);
    finalize_boundary_and_orientation(s);
    return s;
}

DiscreteSurface rp2_mesh(int level) {
    if (level < 1) throw ResolutionTooSmall("round classes need subdivision level >= 1");
    if (level > 8) throw ResolutionTooSmall("subdivision level capped at 8");
    IcoSphere ico = icosphere(level);

    DiscreteSurface s;
    s.class_tag = closed_tag(ConformalClassParam::rp2());
    s.dim = 3;
    s.vertices = ico.vertices;
    // keep one face per antipodal pair: positive side of a fixed linear
    // functional; barycenters of a pair are exact negations
    for (auto [i, j, k] : ico.faces) {
        double bx = ico.vertices[i][0] + ico.vertices[j][0] + ico.vertices[k][0];
        double by = ico.vertices[i][1] + ico.vertices[j][1] + ico.vertices[k][1];
        double bz = ico.vertices[i][2] + ico.vertices[j][2] + ico.vertices[k][2];
        double key = bz != 0.0 ? bz : (by != 0.0 ? by : bx);
        if (key > 0.0) s.triangles.push_back({i, j, k});
    }
    for (int v = 0; v < static_cast<int>(s.vertices.size()); ++v)
        if (ico.antipode[v] < v) s.identification.push_back({v, ico.antipode[v]});
    finalize_dofs(s);
    finalize_boundary_and_orientation(s);
    return s;
}

} // namespace

DiscreteSurface generate_surface_mesh(const ConformalClassParam& param, int resolution) {
    // revalidate: params constructed by hand must still satisfy the moduli constraints
    ConformalClassParam p = make_class(param.kind, param.a, param.b);
    switch (p.kind) {
        case SurfaceClass::Torus:
        case SurfaceClass::Klein: return flat_quotient_mesh(p, resolution);
        case SurfaceClass::Sphere: return sphere_mesh(resolution);
        case SurfaceClass::RP2: return rp2_mesh(resolution);
    }
    throw InvalidClassParam("unknown class");
}

double triangle_area(const DiscreteSurface& s, int t) {
    const auto& a = s.vertices[s.triangles[t][0]];
    const auto& b = s.vertices[s.triangles[t][1]];
    const auto& c = s.vertices[s.triangles[t][2]];
    double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

std::array<double, 3> triangle_barycenter(const DiscreteSurface& s, int t) {
    const auto& a = s.vertices[s.triangles[t][0]];
    const auto& b = s.vertices[s.triangles[t][1]];
    const auto& c = s.vertices[s.triangles[t][2]];
    return {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0};
}

TopologyReport validate_topology(const DiscreteSurface& s) {
    TopologyReport rep;
    auto edges = glued_edges(s);
    std::set<int> used;
    for (const auto& tri : s.triangles)
        for (int v : tri) used.insert(s.vertex_dof[v]);
    rep.glued_vertices = static_cast<int>(used.size());
    rep.glued_edges = static_cast<int>(edges.size());
    rep.faces = s.triangle_count();
    rep.euler_characteristic = rep.glued_vertices - rep.glued_edges + rep.faces;
    rep.orientable = propagate_orientation(s, edges);

    // boundary loops: cycles in the graph of boundary edges (glued indices)
    std::map<int, std::vector<int>> adj;
    int boundary_count = 0;
    for (const auto& [key, uses] : edges) {
        if (uses.size() != 1) continue;
        ++boundary_count;
        adj[key.first].push_back(key.second);
        adj[key.second].push_back(key.first);
    }
    std::set<int> seen;
    for (const auto& [v, nbrs] : adj) {
        if (seen.count(v)) continue;
        ++rep.boundary_loops;
        std::queue<int> q;
        q.push(v);
        seen.insert(v);
        while (!q.empty()) {
            int u = q.front(); q.pop();
            for (int w : adj[u])
                if (!seen.count(w)) { seen.insert(w); q.push(w); }
        }
    }
    (void)boundary_count;

    rep.area = 0.0;
    for (int t = 0; t < s.triangle_count(); ++t) rep.area += triangle_area(s, t);
    return rep;
}

DiscreteSurface extract_subdomain(const DiscreteSurface& surface,
                                  const std::vector<int>& selected_triangles) {
    if (selected_triangles.empty()) throw EmptySelection("selection is empty");
    std::set<int> sel(selected_triangles.begin(), selected_triangles.end());
    for (int t : sel)
        if (t < 0 || t >= surface.triangle_count())
            throw EmptySelection("triangle index out of range: " + std::to_string(t));
    if (static_cast<int>(sel.size()) == surface.triangle_count())
        throw EmptySelection("complement of the selection is empty");

    DiscreteSurface out;
    out.class_tag = ClassTag{surface.class_tag.param, true};
    out.dim = surface.dim;

    // compact kept vertices
    std::vector<int> remap(surface.vertex_count(), -1);
    for (int t : sel)
        for (int v : surface.triangles[t])
            if (remap[v] < 0) remap[v] = 0;
    int next = 0;
    for (int v = 0; v < surface.vertex_count(); ++v)
        if (remap[v] == 0) {
            remap[v] = next++;
            out.vertices.push_back(surface.vertices[v]);
        } else {
            remap[v] = -1;
        }
    for (int t : sel) {
        const auto& tri = surface.triangles[t];
        out.triangles.push_back({remap[tri[0]], remap[tri[1]], remap[tri[2]]});
    }

    // glue kept vertices that share a parent dof class
    std::map<int, std::vector<int>> classes;
    for (int v = 0; v < surface.vertex_count(); ++v)
        if (remap[v] >= 0) classes[surface.vertex_dof[v]].push_back(remap[v]);
    for (auto& [dof, verts] : classes) {
        std::sort(verts.begin(), verts.end());
        for (size_t i = 1; i < verts.size(); ++i) out.identification.push_back({verts[i], verts[0]});
    }
    std::sort(out.identification.begin(), out.identification.end());

    finalize_dofs(out);
    finalize_boundary_and_orientation(out);

    // connectivity over shared glued edges, as a diagnostic only
    auto edges = glued_edges(out);
    UnionFind comp(out.triangle_count());
    for (const auto& [key, uses] : edges)
        for (size_t i = 1; i < uses.size(); ++i) comp.unite(uses[0].face, uses[i].face);
    std::set<int> roots;
    for (int t = 0; t < out.triangle_count(); ++t) roots.insert(comp.find(t));
    if (roots.size() > 1)
        out.warnings.push_back("DisconnectedSelectionWarning: selection has " +
                               std::to_string(roots.size()) + " components");
    return out;
}

double surface_diameter(const DiscreteSurface& s) {
    if (s.dim == 3) return std::acos(-1.0); // geodesic diameter of the unit round sphere
    double w = 0.0, h = 0.0;
    for (const auto& v : s.vertices) {
        w = std::max(w, std::abs(v[0]));
        h = std::max(h, std::abs(v[1]));
    }
    return 0.5 * std::sqrt(w * w + h * h);
}

double barycenter_distance(const DiscreteSurface& s, const std::array<double, 3>& p, int t) {
    auto bc = triangle_barycenter(s, t);
    if (s.dim == 3) {
        auto q = normalized(bc);
        auto pn = normalized(p);
        double dot = std::clamp(q[0] * pn[0] + q[1] * pn[1] + q[2] * pn[2], -1.0, 1.0);
        return std::acos(dot);
    }
    // flat quotient: minimum over the nearby period translates
    double best = std::numeric_limits<double>::infinity();
    const double sb = std::sqrt(std::max(s.class_tag.param.b, 1e-300));
    const double a = s.class_tag.param.a;
    std::array<double, 2> e1{1.0 / sb, 0.0};
    std::array<double, 2> e2{s.class_tag.param.kind == SurfaceClass::Torus ? a / sb : 0.0, sb};
    for (int m = -1; m <= 1; ++m)
        for (int n = -1; n <= 1; ++n) {
            double dx = bc[0] + m * e1[0] + n * e2[0] - p[0];
            double dy = bc[1] + m * e1[1] + n * e2[1] - p[1];
            best = std::min(best, std::hypot(dx, dy));
        }
    return best;
}

std::vector<int> triangles_within(const DiscreteSurface& s, const std::array<double, 3>& p,
                                  double radius) {
    std::vector<int> out;
    for (int t = 0; t < s.triangle_count(); ++t)
        if (barycenter_distance(s, p, t) <= radius) out.push_back(t);
    return out;
}

} // namespace speclab
