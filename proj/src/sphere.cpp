#include "hominv/sphere.hpp"

#include "hominv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace hominv {

namespace {

class KdTree {
public:
    KdTree(const std::vector<Vector>& pts) : dim_(static_cast<std::size_t>(pts.front().size())), count_(pts.size()) {
        data_.resize(dim_ * count_);
        for (std::size_t i = 0; i < count_; ++i)
            for (std::size_t d = 0; d < dim_; ++d) data_[i * dim_ + d] = pts[i][static_cast<Eigen::Index>(d)];
        index_.resize(count_);
        std::iota(index_.begin(), index_.end(), std::size_t{0});
        nodes_.reserve(2 * count_ / kLeaf + 2);
        build(0, count_);
    }

    /// Squared distance from point `q` to its nearest neighbour other than itself.
    double nearest_other_sq(std::size_t q) const {
        double best = std::numeric_limits<double>::infinity();
        search(0, q, best);
        return best;
    }

private:
    static constexpr std::size_t kLeaf = 8;

    struct Node {
        std::size_t begin = 0, end = 0;
        std::size_t axis = 0;
        double split = 0.0;
        int left = -1, right = -1;
    };

    double coord(std::size_t point, std::size_t axis) const { return data_[point * dim_ + axis]; }

    int build(std::size_t begin, std::size_t end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeaf) return id;

        std::size_t axis = 0;
        double widest = -1.0;
        for (std::size_t d = 0; d < dim_; ++d) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = begin; i < end; ++i) {
                lo = std::min(lo, coord(index_[i], d));
                hi = std::max(hi, coord(index_[i], d));
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                axis = d;
            }
        }
        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(index_.begin() + static_cast<std::ptrdiff_t>(begin),
                         index_.begin() + static_cast<std::ptrdiff_t>(mid),
                         index_.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t a, std::size_t b) { return coord(a, axis) < coord(b, axis); });
        const double split = coord(index_[mid], axis);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[static_cast<std::size_t>(id)].axis = axis;
        nodes_[static_cast<std::size_t>(id)].split = split;
        nodes_[static_cast<std::size_t>(id)].left = left;
        nodes_[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    void search(int id, std::size_t q, double& best) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.left < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = index_[i];
                if (p == q) continue;
                double d2 = 0.0;
                for (std::size_t d = 0; d < dim_ && d2 < best; ++d) {
                    const double diff = coord(p, d) - coord(q, d);
                    d2 += diff * diff;
                }
                best = std::min(best, d2);
            }
            return;
        }
        const double delta = coord(q, node.axis) - node.split;
        const int near = delta < 0.0 ? node.left : node.right;
        const int far = delta < 0.0 ? node.right : node.left;
        search(near, q, best);
        if (delta * delta < best) search(far, q, best);
    }

    std::size_t dim_;
    std::size_t count_;
    std::vector<double> data_;
    std::vector<std::size_t> index_;
    std::vector<Node> nodes_;
};

bool lex_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t c = 2; primes.size() < count; ++c) {
        bool prime = true;
        for (auto p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

} // namespace

std::vector<Vector> sphere_points(std::size_t n, std::size_t N, std::uint64_t seed) {
    if (n == 0 || N == 0) throw Error(ErrorKind::InvalidParameter, "sphere sample needs n >= 1 and N >= 1");
    const auto dim = static_cast<Eigen::Index>(n);

    if (n == 1) {
        std::mt19937_64 rng(seed);
        const double first = (rng() & 1u) ? 1.0 : -1.0;
        std::vector<Vector> pts{Vector::Constant(1, first)};
        if (N > 1) pts.push_back(Vector::Constant(1, -first));
        return pts;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto draw = [&]() {
        Vector v(dim);
        double norm = 0.0;
        do {
            for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
            norm = v.norm();
        } while (!(norm > 0.0));
        return Vector(v / norm);
    };

    std::vector<Vector> pts;
    pts.reserve(N);
    for (std::size_t i = 0; i < N; ++i) pts.push_back(draw());

    // Redraw exact duplicates until none remain.
    while (true) {
        std::vector<std::size_t> order(N);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (lex_less(pts[a], pts[b])) return true;
            if (lex_less(pts[b], pts[a])) return false;
            return a < b;
        });
        bool clean = true;
        for (std::size_t k = 1; k < N; ++k) {
            if (pts[order[k]] == pts[order[k - 1]]) {
                pts[order[k]] = draw();
                clean = false;
            }
        }
        if (clean) break;
    }
    return pts;
}

SphereSample sample_sphere(std::size_t n, std::size_t N, std::uint64_t seed) {
    SphereSample s;
    s.points = sphere_points(n, N, seed);
    s.count = s.points.size();
    s.covering_radius_estimate = max_nearest_neighbor_distance(s.points);
    return s;
}

double max_nearest_neighbor_distance(const std::vector<Vector>& points) {
    if (points.size() < 2) return 0.0;
    KdTree tree(points);
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) worst = std::max(worst, tree.nearest_other_sq(i));
    return std::sqrt(worst);
}

std::vector<double> halton(std::uint64_t index, std::size_t dim) {
    static thread_local std::vector<std::uint64_t> primes;
    if (primes.size() < dim) primes = first_primes(std::max<std::size_t>(dim, 16));
    std::vector<double> out(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const auto base = primes[d];
        double f = 1.0, r = 0.0;
        for (auto i = index; i > 0; i /= base) {
            f /= static_cast<double>(base);
            r += f * static_cast<double>(i % base);
        }
        out[d] = r;
    }
    return out;
}

} // namespace hominv
