#pragma once

#include <string>
#include <vector>

namespace orlivar {

/// Reference-element quadrature point: barycentric coordinates and a weight.
/// Weights sum to 1; physical weights are weight * element measure.
struct QuadPoint {
    double bary[3];
    double weight;
};

/// Uniform P1 mesh of the unit interval (dim 1) or unit square (dim 2,
/// right triangles). Immutable after construction.
class Mesh {
public:
    int dim = 1;
    std::vector<double> coords;     // dim entries per node
    std::vector<int> elems;         // dim+1 node ids per element
    std::vector<char> boundary;     // 1 on boundary nodes
    std::vector<int> interior_ids;  // ascending node ids of interior nodes
    std::vector<int> interior_pos;  // node id -> slot in interior_ids, or -1
    std::vector<double> elem_measure;
    std::vector<double> grad_basis; // (dim+1)*dim entries per element: dN_i/dx_j
    std::vector<QuadPoint> quad;    // shared reference rule, degree >= 4
    double measure = 0.0;

    int n_nodes() const { return static_cast<int>(coords.size()) / dim; }
    int n_elems() const { return static_cast<int>(elems.size()) / (dim + 1); }
    int nodes_per_elem() const { return dim + 1; }
    int n_interior() const { return static_cast<int>(interior_ids.size()); }
    int n_quad() const { return static_cast<int>(quad.size()); }
};

/// Uniform mesh of (0,1) with n_elems segments.
Mesh build_mesh_1d(int n_elems);

/// Unit square split into 2*nx*ny right triangles.
Mesh build_mesh_rect_2d(int nx, int ny);

/// Nodal P1 coefficient vector over a mesh, zero on boundary nodes.
class Field {
public:
    explicit Field(const Mesh& mesh) : mesh_(&mesh), coeffs_(mesh.n_nodes(), 0.0) {}

    const Mesh& mesh() const { return *mesh_; }
    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double operator[](int i) const { return coeffs_[i]; }
    double& operator[](int i) { return coeffs_[i]; }

    /// Re-impose the Dirichlet class: zero on every boundary node.
    void clamp_boundary() {
        for (int i = 0; i < mesh_->n_nodes(); ++i)
            if (mesh_->boundary[i]) coeffs_[i] = 0.0;
    }

    void fill(double v) {
        std::fill(coeffs_.begin(), coeffs_.end(), v);
        clamp_boundary();
    }

    double max_abs() const;
    double min_value() const;
    double max_value() const;

    Field& axpy(double alpha, const Field& other); // this += alpha * other
    Field& scale(double alpha);

private:
    const Mesh* mesh_;
    std::vector<double> coeffs_;
};

/// L2 distance between two fields on the same mesh (consistent quadrature).
double l2_distance(const Field& a, const Field& b);

/// Writes "node_id,x[,y],u" rows.
void write_field_csv(const Field& u, const std::string& path);

/// Writes node and element tables for a mesh.
void write_mesh_csv(const Mesh& mesh, const std::string& node_path, const std::string& elem_path);

} // namespace orlivar
