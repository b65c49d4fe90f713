//! A static k-d tree over `K`-dimensional points for nearest-neighbour
//! and fixed-radius queries.

const LEAF_SIZE: usize = 12;

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct KdTree<const K: usize> {
    points: Vec<[f64; K]>,
    ids: Vec<usize>,
    nodes: Vec<Node>,
}

fn dist2<const K: usize>(a: &[f64; K], b: &[f64; K]) -> f64 {
    let mut s = 0.0;
    for k in 0..K {
        let d = a[k] - b[k];
        s += d * d;
    }
    s
}

impl<const K: usize> KdTree<K> {
    /// Builds a tree whose items are identified by their position in `points`.
    pub fn new(points: &[[f64; K]]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::new();
        if !order.is_empty() {
            build(points, &mut order, 0, &mut nodes);
        }
        Self { points: order.iter().map(|&i| points[i]).collect(), ids: order, nodes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index and squared distance of the closest item. Ties resolve to the lower index.
    pub fn nearest(&self, q: &[f64; K]) -> Option<(usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.nearest_rec(0, q, &mut best);
        Some(best)
    }

    fn nearest_rec(&self, node: usize, q: &[f64; K], best: &mut (usize, f64)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for i in start..end {
                    let d = dist2(&self.points[i], q);
                    if d < best.1 || (d == best.1 && self.ids[i] < best.0) {
                        *best = (self.ids[i], d);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = q[axis] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.nearest_rec(near, q, best);
                if diff * diff <= best.1 {
                    self.nearest_rec(far, q, best);
                }
            }
        }
    }

    /// Indices of all items within `radius` (inclusive) of `q`, sorted ascending.
    pub fn within(&self, q: &[f64; K], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.within_rec(0, q, radius * radius, &mut out);
        }
        out.sort_unstable();
        out
    }

    fn within_rec(&self, node: usize, q: &[f64; K], r2: f64, out: &mut Vec<usize>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for i in start..end {
                    if dist2(&self.points[i], q) <= r2 {
                        out.push(self.ids[i]);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = q[axis] - value;
                if diff <= 0.0 || diff * diff <= r2 {
                    self.within_rec(left, q, r2, out);
                }
                if diff >= 0.0 || diff * diff <= r2 {
                    self.within_rec(right, q, r2, out);
                }
            }
        }
    }
}

fn build<const K: usize>(points: &[[f64; K]], order: &mut [usize], offset: usize, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    if order.len() <= LEAF_SIZE {
        nodes.push(Node::Leaf { start: offset, end: offset + order.len() });
        return id;
    }
    let mut lo = [f64::INFINITY; K];
    let mut hi = [f64::NEG_INFINITY; K];
    for &i in order.iter() {
        for k in 0..K {
            lo[k] = lo[k].min(points[i][k]);
            hi[k] = hi[k].max(points[i][k]);
        }
    }
    let axis = (0..K).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap_or(0);
    if hi[axis] - lo[axis] <= 0.0 {
        // All points coincide; splitting cannot separate them.
        nodes.push(Node::Leaf { start: offset, end: offset + order.len() });
        return id;
    }
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| points[a][axis].total_cmp(&points[b][axis]));
    let value = points[order[mid]][axis];
    nodes.push(Node::Leaf { start: 0, end: 0 });
    let (l, r) = order.split_at_mut(mid);
    let left = build(points, l, offset, nodes);
    let right = build(points, r, offset + mid, nodes);
    nodes[id] = Node::Split { axis, value, left, right };
    id
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(n: usize, seed: u64) -> Vec<[f64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect()
    }

    #[test]
    fn nearest_matches_brute_force() {
        let pts = cloud(2000, 1);
        let tree = KdTree::new(&pts);
        for q in cloud(300, 2) {
            let (i, d) = tree.nearest(&q).unwrap();
            let brute = pts
                .iter()
                .enumerate()
                .map(|(j, p)| (j, dist2(p, &q)))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
                .unwrap();
            assert_eq!((i, d), brute);
        }
    }

    #[test]
    fn within_matches_brute_force() {
        let pts = cloud(1500, 3);
        let tree = KdTree::new(&pts);
        for q in cloud(100, 4) {
            let got = tree.within(&q, 0.1);
            let want: Vec<usize> = (0..pts.len()).filter(|&j| dist2(&pts[j], &q) <= 0.01).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn duplicates_and_empty() {
        let empty: KdTree<3> = KdTree::new(&[]);
        assert!(empty.nearest(&[0.0; 3]).is_none());
        let pts = vec![[1.0, 1.0]; 50];
        let tree = KdTree::new(&pts);
        assert_eq!(tree.nearest(&[0.0, 0.0]), Some((0, 2.0)));
        assert_eq!(tree.within(&[1.0, 1.0], 0.0).len(), 50);
    }
}
