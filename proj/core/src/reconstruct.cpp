#include "certiq/reconstruct.hpp"

#include "certiq/error.hpp"
#include "certiq/lagrange.hpp"
#include "certiq/quadrature.hpp"
#include "certiq/raviart_thomas.hpp"

#include <map>
#include <string>

namespace certiq {

int default_data_exactness(int p) noexcept { return std::min(kMaxQuadratureExactness, 2 * p + 8); }

BrokenField local_best(const ElementSource& u, const Mesh& mesh, int p, int exactness) {
    if (exactness <= 0) exactness = default_data_exactness(p);
    const LagrangeBasis& basis = p_basis(p);
    const LagrangeTable& tab = lagrange_table(p, exactness);
    const std::size_t n = basis.size();
    std::vector<BaryPoly> blocks;
    blocks.reserve(mesh.num_triangles());
    std::vector<Vec2> grads(n);
    for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
        const ElementMap map = element_map(mesh.triangle_points(k));
        const DenseMatrix g = nodal_stiffness(map, p);
        const Vector mean_row = nodal_integrals(map, p);
        DenseMatrix a(n + 1, n + 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = g(i, j);
            a(i, n) = mean_row[i];
            a(n, i) = mean_row[i];
        }
        Vector b(n + 1, 0.0);
        for (std::size_t q = 0; q < tab.rule->size(); ++q) {
            const Bary& l = tab.rule->points[q];
            const Point2 x = map.point(l);
            const double w = tab.rule->weights[q] * map.det;
            const Vec2 du = u.gradient(k, l, x);
            for (std::size_t i = 0; i < n; ++i)
                b[i] += w * dot(du, physical_gradient(tab.bary_grads[q][i], map.grad_lambda));
            b[n] += w * u.value(k, l, x);
        }
        Vector c;
        try {
            c = lu_solve(a, b);
        } catch (const SingularMatrixError& e) {
            throw AssemblyError("local_best: singular system on element " + std::to_string(k) + ": " + e.what());
        }
        c.resize(n);
        blocks.push_back(basis.from_nodal(c));
    }
    return BrokenField(mesh, p, std::move(blocks));
}

BrokenField local_best(const FieldFunction& u, const Mesh& mesh, int p, int exactness) {
    return local_best(FunctionSource(u), mesh, p, exactness);
}

std::vector<BaryPoly> restrict_to_patch(const BrokenField& field, const VertexPatch& patch) {
    std::vector<BaryPoly> out;
    out.reserve(patch.elements.size());
    for (std::size_t k : patch.elements) out.push_back(field.element(k));
    return out;
}

PotentialReconstruction::PotentialReconstruction(const Mesh& mesh, const VertexPatch& patch, int p)
    : p_(p), center_local_(patch.center_local_index), space_(mesh, patch.elements, p) {
    for (std::size_t k : patch.elements) {
        maps_.push_back(element_map(mesh.triangle_points(k)));
        element_stiffness_.push_back(nodal_stiffness(maps_.back(), p));
    }
    const std::size_t n = space_.num_dofs();
    stiffness_ = DenseMatrix(n, n);
    for (std::size_t e = 0; e < maps_.size(); ++e) {
        const auto nodes = space_.element_nodes(e);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::size_t di = space_.node_dof(nodes[i]);
            if (di == kNone) continue;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const std::size_t dj = space_.node_dof(nodes[j]);
                if (dj != kNone) stiffness_(di, dj) += element_stiffness_[e](i, j);
            }
        }
    }
    if (n > 0) {
        try {
            factor_.emplace(stiffness_);
        } catch (const NotSpdError& e) {
            throw AssemblyError("potential reconstruction: singular patch stiffness at vertex " +
                                std::to_string(patch.center) + ": " + e.what());
        }
    }
}

std::vector<BaryPoly> PotentialReconstruction::datum(std::span<const BaryPoly> uh) const {
    if (uh.size() != maps_.size()) throw InvalidArgument("potential reconstruction: one block per patch element");
    std::vector<BaryPoly> out;
    out.reserve(uh.size());
    for (std::size_t e = 0; e < uh.size(); ++e)
        out.push_back(lagrange_reduce(BaryPoly::barycentric(center_local_[e]) * uh[e], p_));
    return out;
}

Vector PotentialReconstruction::rhs(std::span<const BaryPoly> data) const {
    if (data.size() != maps_.size()) throw InvalidArgument("potential reconstruction: one block per patch element");
    const LagrangeBasis& basis = p_basis(p_);
    Vector b(num_dofs(), 0.0);
    for (std::size_t e = 0; e < data.size(); ++e) {
        const Vector f = basis.to_nodal(data[e]);
        const Vector g = multiply(element_stiffness_[e], f);
        const auto nodes = space_.element_nodes(e);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::size_t d = space_.node_dof(nodes[i]);
            if (d != kNone) b[d] += g[i];
        }
    }
    return b;
}

Vector PotentialReconstruction::solve(std::span<const BaryPoly> data) const {
    if (!factor_) return {};
    return factor_->solve(rhs(data));
}

std::vector<BaryPoly> PotentialReconstruction::expand(std::span<const double> coeffs) const {
    const LagrangeBasis& basis = p_basis(p_);
    std::vector<BaryPoly> out;
    out.reserve(maps_.size());
    Vector local(basis.size());
    for (std::size_t e = 0; e < maps_.size(); ++e) {
        const auto nodes = space_.element_nodes(e);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::size_t d = space_.node_dof(nodes[i]);
            local[i] = d == kNone ? 0.0 : coeffs[d];
        }
        out.push_back(basis.from_nodal(local));
    }
    return out;
}

FluxReconstruction::FluxReconstruction(const Mesh& mesh, const VertexPatch& patch, int p)
    : p_(p), exactness_(2 * p + 2), center_local_(patch.center_local_index) {
    const RTBasis& rt = rt_basis(p);
    const std::size_t nrt = rt.size();
    const std::size_t dimp = num_monomials(p);

    std::map<std::pair<std::size_t, int>, std::size_t> edge_dofs;
    for (std::size_t k : patch.elements) {
        const Triangle& t = mesh.triangle(k);
        maps_.push_back(element_map(mesh.triangle_points(k)));
        std::vector<std::size_t> index(nrt);
        std::vector<int> sign(nrt, 1);
        for (std::size_t j = 0; j < nrt; ++j) {
            if (j < rt.num_edge_dofs()) {
                const int edge = static_cast<int>(j) / (p + 1);
                const int mom = static_cast<int>(j) % (p + 1);
                const std::size_t ge = mesh.triangle_edges(k)[static_cast<std::size_t>(edge)];
                const auto [it, inserted] = edge_dofs.try_emplace({ge, mom}, nx_);
                if (inserted) ++nx_;
                index[j] = it->second;
                sign[j] = rt_edge_sign(t, edge, mom);
            } else {
                index[j] = nx_++;
            }
        }
        x_index_.push_back(std::move(index));
        x_sign_.push_back(std::move(sign));
    }
    ny_ = maps_.size() * dimp;

    const RTTable& rtab = rt_table(p, exactness_);
    const LagrangeTable& ltab = lagrange_table(p, exactness_);
    mass_ = DenseMatrix(nx_, nx_);
    div_ = DenseMatrix(ny_, nx_);
    std::vector<Vec2> w(nrt);
    std::vector<double> dv(nrt);
    for (std::size_t e = 0; e < maps_.size(); ++e) {
        const ElementMap& map = maps_[e];
        for (std::size_t q = 0; q < rtab.rule->size(); ++q) {
            const double wq = rtab.rule->weights[q] * map.det;
            for (std::size_t j = 0; j < nrt; ++j) {
                w[j] = x_sign_[e][j] * push_forward_rt(map, rtab.values[q][j]);
                dv[j] = x_sign_[e][j] * push_forward_div(map, rtab.divergences[q][j]);
            }
            for (std::size_t i = 0; i < nrt; ++i) {
                for (std::size_t j = 0; j < nrt; ++j) mass_(x_index_[e][i], x_index_[e][j]) += wq * dot(w[i], w[j]);
                for (std::size_t y = 0; y < dimp; ++y)
                    div_(e * dimp + y, x_index_[e][i]) += wq * dv[i] * ltab.values[q][y];
            }
        }
    }

    const std::size_t n = nx_ + ny_;
    DenseMatrix saddle(n, n);
    for (std::size_t i = 0; i < nx_; ++i)
        for (std::size_t j = 0; j < nx_; ++j) saddle(i, j) = mass_(i, j);
    for (std::size_t y = 0; y < ny_; ++y) {
        for (std::size_t x = 0; x < nx_; ++x) {
            saddle(nx_ + y, x) = div_(y, x);
            saddle(x, nx_ + y) = div_(y, x);
        }
    }
    try {
        factor_.emplace(saddle);
    } catch (const SingularMatrixError& e) {
        throw AssemblyError("flux reconstruction: singular saddle-point matrix at vertex " +
                            std::to_string(patch.center) + " (inf-sup violated): " + e.what());
    }
}

Vector FluxReconstruction::rhs(std::span<const BaryPoly> uh) const {
    if (uh.size() != maps_.size()) throw InvalidArgument("flux reconstruction: one block per patch element");
    const RTTable& rtab = rt_table(p_, exactness_);
    Vector b(nx_, 0.0);
    for (std::size_t e = 0; e < maps_.size(); ++e) {
        const ElementMap& map = maps_[e];
        const BaryPoly weighted = BaryPoly::barycentric(center_local_[e]) * uh[e];
        for (std::size_t q = 0; q < rtab.rule->size(); ++q) {
            const Bary& l = rtab.rule->points[q];
            const double wq = rtab.rule->weights[q] * map.det;
            const Vec2 g = physical_gradient(weighted.bary_gradient(l), map.grad_lambda);
            for (std::size_t j = 0; j < rtab.values[q].size(); ++j) {
                const Vec2 w = x_sign_[e][j] * push_forward_rt(map, rtab.values[q][j]);
                b[x_index_[e][j]] += wq * dot(g, w);
            }
        }
    }
    return b;
}

Vector FluxReconstruction::solve_rhs(std::span<const double> flux_rhs) const {
    Vector b(nx_ + ny_, 0.0);
    std::copy(flux_rhs.begin(), flux_rhs.end(), b.begin());
    Vector x = factor_->solve(b);
    x.resize(nx_);
    return x;
}

Vector FluxReconstruction::solve(std::span<const BaryPoly> uh) const { return solve_rhs(rhs(uh)); }

Vec2 FluxReconstruction::value(std::span<const double> r, std::size_t e, const Bary& l) const {
    std::vector<Vec2> vals;
    std::vector<double> divs;
    rt_basis(p_).evaluate({l[1], l[2]}, vals, divs);
    Vec2 out;
    for (std::size_t j = 0; j < vals.size(); ++j)
        out += (x_sign_[e][j] * r[x_index_[e][j]]) * push_forward_rt(maps_[e], vals[j]);
    return out;
}

double FluxReconstruction::divergence_at(std::span<const double> r, std::size_t e, const Bary& l) const {
    std::vector<Vec2> vals;
    std::vector<double> divs;
    rt_basis(p_).evaluate({l[1], l[2]}, vals, divs);
    double out = 0.0;
    for (std::size_t j = 0; j < divs.size(); ++j)
        out += x_sign_[e][j] * r[x_index_[e][j]] * push_forward_div(maps_[e], divs[j]);
    return out;
}

Vector FluxReconstruction::elementwise_divergence_norms(std::span<const double> r) const {
    const RTTable& rtab = rt_table(p_, exactness_);
    Vector out(maps_.size(), 0.0);
    for (std::size_t e = 0; e < maps_.size(); ++e) {
        double sum = 0.0;
        for (std::size_t q = 0; q < rtab.rule->size(); ++q) {
            double d = 0.0;
            for (std::size_t j = 0; j < rtab.divergences[q].size(); ++j)
                d += x_sign_[e][j] * r[x_index_[e][j]] * push_forward_div(maps_[e], rtab.divergences[q][j]);
            sum += rtab.rule->weights[q] * maps_[e].det * d * d;
        }
        out[e] = std::sqrt(sum);
    }
    return out;
}

} // namespace certiq
