//! Hypergraph 2-colouring to correlation clustering.
//!
//! Every vertex of positive degree becomes a ring of `2r` triangles
//! `{a_i, b_i, a_{i+1}}`. The ring has exactly two perfect triangle covers
//! (even or odd `i`), which encode the two colours; each cover leaves every
//! other tip `b_i` uncovered. Tips are grouped into `r` slots `(p, q) =
//! (b_{2j+1}, b_{2j})`: colour 0 leaves `p` free, colour 1 leaves `q` free.
//!
//! For a hyperedge, the `p` tips of its three slots share an absorber (two
//! adjacent fresh vertices joined to all three tips), and so do the `q` tips.
//! An absorber plus one or two free tips forms a triangle or diamond, and it
//! cannot take zero or three, so a zero-slack clustering exists exactly when
//! no hyperedge is monochromatic. Unused slots are paired through a hub
//! vertex so every vertex ends with positive degree 4, giving `M = 2N`.

use crate::error::{Error, Result};
use crate::formula::Hypergraph3;
use crate::instance::{Clustering, EdgeLabeling};

use super::{Artifact, StageTrace};

struct Ring {
    a: Vec<usize>,
    b: Vec<usize>,
}

struct Absorber {
    u: usize,
    w: usize,
    /// Tips joined to the absorber, in hyperedge vertex order.
    tips: [usize; 3],
}

struct HubSide {
    u: usize,
    w: usize,
    p: usize,
    q: usize,
}

struct Layout {
    n: usize,
    edges: Vec<(usize, usize)>,
    names: Vec<String>,
    rings: Vec<Option<Ring>>,
    /// `(p_absorber, q_absorber)` per hyperedge.
    absorbers: Vec<(Absorber, Absorber)>,
    hubs: Vec<(usize, [HubSide; 2])>,
}

impl Layout {
    fn fresh(&mut self, name: String) -> usize {
        self.names.push(name);
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn build(h: &Hypergraph3) -> Result<Layout> {
        let deg = h.degrees();
        let mut r: Vec<usize> = deg.iter().map(|&d| if d == 1 { 2 } else { d }).collect();
        let unused: usize = (0..deg.len()).map(|v| r[v] - deg[v]).sum();
        if unused % 2 == 1 {
            let v = deg.iter().position(|&d| d == 1).expect("odd slack needs a degree-1 vertex");
            r[v] = 3;
        }

        let mut layout = Layout {
            n: 0,
            edges: Vec::new(),
            names: Vec::new(),
            rings: Vec::new(),
            absorbers: Vec::new(),
            hubs: Vec::new(),
        };
        let mut slots: Vec<Vec<(usize, usize)>> = Vec::new();
        for v in 0..deg.len() {
            if r[v] == 0 {
                layout.rings.push(None);
                slots.push(Vec::new());
                continue;
            }
            let len = 2 * r[v];
            let a: Vec<usize> = (0..len).map(|i| layout.fresh(format!("v{v}.a{i}"))).collect();
            let b: Vec<usize> = (0..len).map(|i| layout.fresh(format!("v{v}.b{i}"))).collect();
            for i in 0..len {
                let next = a[(i + 1) % len];
                layout.edge(a[i], next);
                layout.edge(a[i], b[i]);
                layout.edge(b[i], next);
            }
            slots.push((0..r[v]).map(|j| (b[2 * j + 1], b[2 * j])).collect());
            layout.rings.push(Some(Ring { a, b }));
        }

        let mut used = vec![0; deg.len()];
        for (e, edge) in h.edges().iter().enumerate() {
            let mut ps = [0; 3];
            let mut qs = [0; 3];
            for (i, &v) in edge.iter().enumerate() {
                (ps[i], qs[i]) = slots[v][used[v]];
                used[v] += 1;
            }
            let pa = layout.absorber(format!("e{e}.p"), ps);
            let qa = layout.absorber(format!("e{e}.q"), qs);
            layout.absorbers.push((pa, qa));
        }

        let leftover: Vec<(usize, usize)> =
            (0..deg.len()).flat_map(|v| slots[v][used[v]..].iter().copied().collect::<Vec<_>>()).collect();
        if leftover.len() % 2 != 0 {
            return Err(Error::Generation("unpaired leftover slot".into()));
        }
        for (i, pair) in leftover.chunks(2).enumerate() {
            let x = layout.fresh(format!("hub{i}.x"));
            let sides = [0, 1].map(|s| {
                let (p, q) = pair[s];
                let u = layout.fresh(format!("hub{i}.s{s}.u"));
                let w = layout.fresh(format!("hub{i}.s{s}.w"));
                layout.edge(u, w);
                for y in [p, q, x] {
                    layout.edge(u, y);
                    layout.edge(w, y);
                }
                HubSide { u, w, p, q }
            });
            layout.hubs.push((x, sides));
        }
        Ok(layout)
    }

    fn absorber(&mut self, name: String, tips: [usize; 3]) -> Absorber {
        let u = self.fresh(format!("{name}.u"));
        let w = self.fresh(format!("{name}.w"));
        self.edge(u, w);
        for t in tips {
            self.edge(u, t);
            self.edge(w, t);
        }
        Absorber { u, w, tips }
    }
}

/// Builds the correlation instance of `h`. The cluster bound is recorded as
/// the number of emitted vertices.
pub fn hypergraph_to_correlation(h: &Hypergraph3) -> Result<(EdgeLabeling, usize, StageTrace)> {
    let layout = Layout::build(h)?;
    let labeling = EdgeLabeling::new(layout.n, layout.edges.iter().copied())?;
    let k = layout.n;
    let out = Artifact::Correlation { labeling: labeling.clone(), k };
    let trace = StageTrace {
        from: super::Stage::Hypergraph,
        to: super::Stage::Correlation,
        input: Artifact::Hypergraph(h.clone()).sizes(),
        output: out.sizes(),
        output_names: layout.names,
        cluster_bound: Some(k),
    };
    Ok((labeling, k, trace))
}

/// The zero-slack clustering (cost `M - N`) of the emitted instance induced by
/// a proper 2-colouring of `h` (`false` is colour 0).
pub fn coloring_to_clustering(h: &Hypergraph3, coloring: &[bool]) -> Result<Clustering> {
    if coloring.len() != h.num_vertices() {
        return Err(Error::SizeMismatch { expected: h.num_vertices(), got: coloring.len() });
    }
    let layout = Layout::build(h)?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    // free tips, by vertex id
    let mut free = vec![false; layout.n];
    for (v, ring) in layout.rings.iter().enumerate() {
        let Some(ring) = ring else { continue };
        let len = ring.a.len();
        let start = usize::from(coloring[v]);
        for i in (start..len).step_by(2) {
            groups.push(vec![ring.a[i], ring.b[i], ring.a[(i + 1) % len]]);
        }
        for i in (1 - start..len).step_by(2) {
            free[ring.b[i]] = true;
        }
    }
    for (e, (pa, qa)) in layout.absorbers.iter().enumerate() {
        for ab in [pa, qa] {
            let mut g = vec![ab.u, ab.w];
            g.extend(ab.tips.iter().copied().filter(|&t| free[t]));
            if g.len() == 2 || g.len() == 5 {
                return Err(Error::InvalidInput(format!("hyperedge {e} is monochromatic under the colouring")));
            }
            groups.push(g);
        }
    }
    for (x, sides) in &layout.hubs {
        for (s, side) in sides.iter().enumerate() {
            let tip = if free[side.p] { side.p } else { side.q };
            let mut g = vec![side.u, side.w, tip];
            if s == 0 {
                g.push(*x);
            }
            groups.push(g);
        }
    }
    Clustering::from_groups(layout.n, &groups)
}

/// Reads a colouring off a clustering of the emitted instance: vertex `v` has
/// colour 0 when `a_0` and `b_0` of its ring share a cluster.
pub fn pull_back_coloring(h: &Hypergraph3, clustering: &Clustering) -> Result<Vec<bool>> {
    let layout = Layout::build(h)?;
    if clustering.n() != layout.n {
        return Err(Error::SizeMismatch { expected: layout.n, got: clustering.n() });
    }
    Ok(layout
        .rings
        .iter()
        .map(|ring| ring.as_ref().is_some_and(|r| !clustering.same_cluster(r.a[0], r.b[0])))
        .collect())
}
