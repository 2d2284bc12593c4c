#include "orlivar/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace orlivar {
namespace {

void finalize_interior(Mesh& m) {
    m.interior_pos.assign(m.n_nodes(), -1);
    for (int i = 0; i < m.n_nodes(); ++i) {
        if (!m.boundary[i]) {
            m.interior_pos[i] = static_cast<int>(m.interior_ids.size());
            m.interior_ids.push_back(i);
        }
    }
}

} // namespace

Mesh build_mesh_1d(int n_elems) {
    if (n_elems < 2) throw std::invalid_argument("build_mesh_1d: need n_elems >= 2");
    Mesh m;
    m.dim = 1;
    const int n_nodes = n_elems + 1;
    const double h = 1.0 / n_elems;
    m.coords.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) m.coords[i] = i * h;
    m.boundary.assign(n_nodes, 0);
    m.boundary.front() = 1;
    m.boundary.back() = 1;
    m.elems.reserve(2 * n_elems);
    m.elem_measure.assign(n_elems, h);
    m.grad_basis.resize(2 * n_elems);
    for (int e = 0; e < n_elems; ++e) {
        m.elems.push_back(e);
        m.elems.push_back(e + 1);
        m.grad_basis[2 * e + 0] = -1.0 / h;
        m.grad_basis[2 * e + 1] = 1.0 / h;
    }
    m.measure = 1.0;
    // 3-point Gauss on the segment, degree 5.
    const double g = std::sqrt(0.6) * 0.5; // sqrt(3/5)/2
    m.quad = {
        QuadPoint{{0.5 + g, 0.5 - g, 0.0}, 5.0 / 18.0},
        QuadPoint{{0.5, 0.5, 0.0}, 8.0 / 18.0},
        QuadPoint{{0.5 - g, 0.5 + g, 0.0}, 5.0 / 18.0},
    };
    finalize_interior(m);
    return m;
}

Mesh build_mesh_rect_2d(int nx, int ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("build_mesh_rect_2d: need nx, ny >= 2");
    Mesh m;
    m.dim = 2;
    const int nnx = nx + 1, nny = ny + 1;
    m.coords.resize(2 * nnx * nny);
    m.boundary.assign(nnx * nny, 0);
    for (int j = 0; j < nny; ++j) {
        for (int i = 0; i < nnx; ++i) {
            const int id = j * nnx + i;
            m.coords[2 * id] = static_cast<double>(i) / nx;
            m.coords[2 * id + 1] = static_cast<double>(j) / ny;
            if (i == 0 || i == nx || j == 0 || j == ny) m.boundary[id] = 1;
        }
    }
    const int n_tris = 2 * nx * ny;
    m.elems.reserve(3 * n_tris);
    m.elem_measure.reserve(n_tris);
    m.grad_basis.resize(6 * n_tris);
    int e = 0;
    const auto add_tri = [&](int a, int b, int c) {
        m.elems.push_back(a);
        m.elems.push_back(b);
        m.elems.push_back(c);
        const double xa = m.coords[2 * a], ya = m.coords[2 * a + 1];
        const double xb = m.coords[2 * b], yb = m.coords[2 * b + 1];
        const double xc = m.coords[2 * c], yc = m.coords[2 * c + 1];
        const double two_area = (xb - xa) * (yc - ya) - (xc - xa) * (yb - ya);
        m.elem_measure.push_back(0.5 * two_area);
        double* gb = &m.grad_basis[6 * e];
        gb[0] = (yb - yc) / two_area;
        gb[1] = (xc - xb) / two_area;
        gb[2] = (yc - ya) / two_area;
        gb[3] = (xa - xc) / two_area;
        gb[4] = (ya - yb) / two_area;
        gb[5] = (xb - xa) / two_area;
        ++e;
    };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = j * nnx + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + nnx;
            const int v11 = v01 + 1;
            add_tri(v00, v10, v11);
            add_tri(v00, v11, v01);
        }
    }
    m.measure = 1.0;
    // 6-point symmetric triangle rule, degree 4.
    const double a1 = 0.445948490915965, b1 = 0.108103018168070, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, b2 = 0.816847572980459, w2 = 0.109951743655322;
    m.quad = {
        QuadPoint{{a1, a1, b1}, w1}, QuadPoint{{a1, b1, a1}, w1}, QuadPoint{{b1, a1, a1}, w1},
        QuadPoint{{a2, a2, b2}, w2}, QuadPoint{{a2, b2, a2}, w2}, QuadPoint{{b2, a2, a2}, w2},
    };
    finalize_interior(m);
    return m;
}

double Field::max_abs() const {
    double v = 0.0;
    for (double c : coeffs_) v = std::max(v, std::abs(c));
    return v;
}

double Field::min_value() const {
    double v = coeffs_.empty() ? 0.0 : coeffs_[0];
    for (double c : coeffs_) v = std::min(v, c);
    return v;
}

double Field::max_value() const {
    double v = coeffs_.empty() ? 0.0 : coeffs_[0];
    for (double c : coeffs_) v = std::max(v, c);
    return v;
}

Field& Field::axpy(double alpha, const Field& other) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += alpha * other.coeffs_[i];
    return *this;
}

Field& Field::scale(double alpha) {
    for (double& c : coeffs_) c *= alpha;
    return *this;
}

double l2_distance(const Field& a, const Field& b) {
    const Mesh& m = a.mesh();
    const int npe = m.nodes_per_elem();
    double acc = 0.0;
    for (int e = 0; e < m.n_elems(); ++e) {
        const int* nd = &m.elems[npe * e];
        for (const auto& qp : m.quad) {
            double diff = 0.0;
            for (int k = 0; k < npe; ++k) diff += qp.bary[k] * (a[nd[k]] - b[nd[k]]);
            acc += m.elem_measure[e] * qp.weight * diff * diff;
        }
    }
    return std::sqrt(acc);
}

void write_field_csv(const Field& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    const Mesh& m = u.mesh();
    out.precision(17);
    out << (m.dim == 1 ? "node_id,x,u\n" : "node_id,x,y,u\n");
    for (int i = 0; i < m.n_nodes(); ++i) {
        out << i << ',' << m.coords[m.dim * i];
        if (m.dim == 2) out << ',' << m.coords[2 * i + 1];
        out << ',' << u[i] << '\n';
    }
}

void write_mesh_csv(const Mesh& m, const std::string& node_path, const std::string& elem_path) {
    std::ofstream nodes(node_path);
    if (!nodes) throw std::runtime_error("cannot open " + node_path);
    nodes.precision(17);
    nodes << (m.dim == 1 ? "node_id,x,boundary\n" : "node_id,x,y,boundary\n");
    for (int i = 0; i < m.n_nodes(); ++i) {
        nodes << i << ',' << m.coords[m.dim * i];
        if (m.dim == 2) nodes << ',' << m.coords[2 * i + 1];
        nodes << ',' << static_cast<int>(m.boundary[i]) << '\n';
    }
    std::ofstream elems(elem_path);
    if (!elems) throw std::runtime_error("cannot open " + elem_path);
    elems << (m.dim == 1 ? "elem_id,n0,n1\n" : "elem_id,n0,n1,n2\n");
    const int npe = m.nodes_per_elem();
    for (int e = 0; e < m.n_elems(); ++e) {
        elems << e;
        for (int k = 0; k < npe; ++k) elems << ',' << m.elems[npe * e + k];
        elems << '\n';
    }
}

} // namespace orlivar
