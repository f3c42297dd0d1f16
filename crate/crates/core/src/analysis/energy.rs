//! Riesz α-energies of atomic measures.

use num_complex::Complex64;

use crate::parallel::ordered_map;
use crate::patterson::AtomicMeasure;

const ROW_CHUNK: usize = 256;

/// Σ_{i≠j} wᵢ wⱼ |ξᵢ − ξⱼ|^{−α} by direct double sum (finite atoms only).
pub fn alpha_energy_exact(mu: &AtomicMeasure, alpha: f64) -> f64 {
    let pts: Vec<(Complex64, f64)> = mu.finite_atoms().collect();
    let n = pts.len();
    let half = -0.5 * alpha;
    let parts = ordered_map(n.div_ceil(ROW_CHUNK), |c| {
        let mut acc = 0.0;
        for i in c * ROW_CHUNK..((c + 1) * ROW_CHUNK).min(n) {
            let (zi, wi) = pts[i];
            let mut row = 0.0;
            for (j, &(zj, wj)) in pts.iter().enumerate() {
                if j != i {
                    row += wj * (zi - zj).norm_sqr().powf(half);
                }
            }
            acc += wi * row;
        }
        acc
    });
    parts.iter().sum()
}

/// Quadtree node holding a contiguous range of sorted points.
struct Node {
    half: f64,
    mass: f64,
    centroid: Complex64,
    // second moments about the centroid: Σw(dx²), Σw(dy²), Σw(dx dy)
    qxx: f64,
    qyy: f64,
    qxy: f64,
    start: usize,
    end: usize,
    children: Vec<usize>,
}

struct QuadTree {
    nodes: Vec<Node>,
    pts: Vec<(Complex64, f64)>,
}

const LEAF: usize = 16;

impl QuadTree {
    fn build(mut pts: Vec<(Complex64, f64)>) -> Self {
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (z, _) in &pts {
            lo_x = lo_x.min(z.re);
            lo_y = lo_y.min(z.im);
            hi_x = hi_x.max(z.re);
            hi_y = hi_y.max(z.im);
        }
        let center = Complex64::new(0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y));
        let half = 0.5 * (hi_x - lo_x).max(hi_y - lo_y) * (1.0 + 1e-12) + 1e-300;
        let n = pts.len();
        let mut tree = QuadTree { nodes: Vec::new(), pts: Vec::new() };
        tree.split(&mut pts, 0, n, center, half, 0);
        tree.pts = pts;
        tree
    }

    fn split(&mut self, pts: &mut [(Complex64, f64)], start: usize, end: usize, center: Complex64, half: f64, depth: usize) -> usize {
        let idx = self.nodes.len();
        let slice = &pts[start..end];
        let mass: f64 = slice.iter().map(|p| p.1).sum();
        let centroid = slice.iter().map(|p| p.0 * p.1).sum::<Complex64>() / mass;
        let (mut qxx, mut qyy, mut qxy) = (0.0, 0.0, 0.0);
        for (z, w) in slice {
            let d = z - centroid;
            qxx += w * d.re * d.re;
            qyy += w * d.im * d.im;
            qxy += w * d.re * d.im;
        }
        self.nodes.push(Node { half, mass, centroid, qxx, qyy, qxy, start, end, children: Vec::new() });
        if end - start <= LEAF || depth > 60 {
            return idx;
        }
        // partition into quadrants: by x then by y
        let sub = &mut pts[start..end];
        let mid_x = partition(sub, |z| z.re < center.re);
        let (left, right) = sub.split_at_mut(mid_x);
        let mid_l = partition(left, |z| z.im < center.im);
        let mid_r = partition(right, |z| z.im < center.im);
        let bounds = [
            (start, start + mid_l, Complex64::new(-1.0, -1.0)),
            (start + mid_l, start + mid_x, Complex64::new(-1.0, 1.0)),
            (start + mid_x, start + mid_x + mid_r, Complex64::new(1.0, -1.0)),
            (start + mid_x + mid_r, end, Complex64::new(1.0, 1.0)),
        ];
        let h = 0.5 * half;
        let mut children = Vec::new();
        for (a, b, dir) in bounds {
            if b > a {
                children.push(self.split(pts, a, b, center + dir * h, h, depth + 1));
            }
        }
        self.nodes[idx].children = children;
        idx
    }
}

fn partition<F: Fn(Complex64) -> bool>(v: &mut [(Complex64, f64)], pred: F) -> usize {
    let mut i = 0;
    for j in 0..v.len() {
        if pred(v[j].0) {
            v.swap(i, j);
            i += 1;
        }
    }
    i
}

/// Far-field value of Σ w |z − ζ|^{−α} over a cell, to second order about its centroid.
#[inline]
fn far_field(node: &Node, z: Complex64, alpha: f64) -> f64 {
    let d = z - node.centroid;
    let r2 = d.norm_sqr();
    let base = r2.powf(-0.5 * alpha);
    // Hessian of |x|^{−α}: α r^{−α−2} [(α+2) x xᵀ / r² − I]
    let k = alpha / r2;
    let ux = d.re * d.re / r2;
    let uy = d.im * d.im / r2;
    let uxy = d.re * d.im / r2;
    let tr = (alpha + 2.0) * (ux * node.qxx + uy * node.qyy + 2.0 * uxy * node.qxy) - (node.qxx + node.qyy);
    base * (node.mass + 0.5 * k * tr)
}

/// Tree-code energy with opening angle `theta` (cell diameter over distance).
pub fn alpha_energy_tree(mu: &AtomicMeasure, alpha: f64, theta: f64) -> f64 {
    let pts: Vec<(Complex64, f64)> = mu.finite_atoms().collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let tree = QuadTree::build(pts);
    let n = tree.pts.len();
    let half = -0.5 * alpha;
    let theta2 = theta * theta;
    let parts = ordered_map(n.div_ceil(ROW_CHUNK), |c| {
        let mut acc = 0.0;
        let mut stack = Vec::with_capacity(128);
        for i in c * ROW_CHUNK..((c + 1) * ROW_CHUNK).min(n) {
            let (zi, wi) = tree.pts[i];
            let mut row = 0.0;
            stack.clear();
            stack.push(0usize);
            while let Some(id) = stack.pop() {
                let node = &tree.nodes[id];
                let inside = i >= node.start && i < node.end;
                let d2 = (zi - node.centroid).norm_sqr();
                let size = 2.0 * node.half;
                if !inside && size * size < theta2 * d2 {
                    row += far_field(node, zi, alpha);
                } else if node.children.is_empty() {
                    for j in node.start..node.end {
                        if j != i {
                            let (zj, wj) = tree.pts[j];
                            row += wj * (zi - zj).norm_sqr().powf(half);
                        }
                    }
                } else {
                    stack.extend(node.children.iter().copied());
                }
            }
            acc += wi * row;
        }
        acc
    });
    parts.iter().sum()
}

/// Default opening angle for [`alpha_energy`].
pub const TREE_THETA: f64 = 0.5;
/// Atom count above which [`alpha_energy`] switches to the tree code.
pub const EXACT_LIMIT: usize = 20_000;

/// Riesz energy, exact for small measures and tree-approximated otherwise.
pub fn alpha_energy(mu: &AtomicMeasure, alpha: f64) -> f64 {
    if mu.len() <= EXACT_LIMIT {
        alpha_energy_exact(mu, alpha)
    } else {
        alpha_energy_tree(mu, alpha, TREE_THETA)
    }
}
