//! Doodle diagrams on the 2-sphere as oriented 4-valent combinatorial maps.
//!
//! A diagram is a set of crossings, each carrying four darts in
//! counterclockwise rotation order, an edge pairing of darts, a flow
//! direction per dart, a count of crossing-free circles, and — when the
//! crossing part is disconnected — face merges recording which traced faces
//! bound a common spherical region.
//!
//! Dart ids are structural: dart `4c + s` sits at crossing `c` in rotation
//! slot `s`. Rotation order is counterclockwise; slots `0,2` carry one
//! transverse strand and `1,3` the other. Face walks follow
//! `d -> rotation_next(opposite(d))`, which keeps the face on the right of
//! the traversal. A dart traverses its edge from its own crossing toward the
//! opposite end, and the strand flows toward the inward dart.

mod canon;
mod closure;
mod io;
mod smooth;

pub use canon::CanonicalCode;
pub use closure::closure;
pub use io::{read_diagram, write_diagram, DiagramFile};
pub(crate) use smooth::smoothed_partner as smoothed_step;
pub use smooth::{SeifertFamily, Smoothing};

use std::collections::BTreeSet;

use thiserror::Error;

pub type DartId = usize;
pub type CrossingId = usize;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("diagram file: {0}")]
    Io(String),
}

/// Optional endpoint labels carried by open twin diagrams; closed diagrams
/// built by `closure` never have them. They are loaded, validated for
/// existence and re-emitted, nothing more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Markers {
    pub p: Vec<DartId>,
    pub q: Vec<DartId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    /// Edge involution; `opposite[d]` is the other end of the edge of `d`.
    opposite: Vec<DartId>,
    /// True when the strand flows into the dart's crossing along this dart.
    inward: Vec<bool>,
    free_circles: usize,
    /// Groups of darts whose traced faces bound one common region. Needed
    /// exactly when the crossing part is disconnected.
    merges: Vec<Vec<DartId>>,
    markers: Option<Markers>,
}

impl Diagram {
    /// A diagram with no crossings and `free_circles` crossing-free circles.
    pub fn circles(free_circles: usize) -> Self {
        Diagram {
            opposite: Vec::new(),
            inward: Vec::new(),
            free_circles,
            merges: Vec::new(),
            markers: None,
        }
    }

    pub(crate) fn from_parts(
        opposite: Vec<DartId>,
        inward: Vec<bool>,
        free_circles: usize,
        merges: Vec<Vec<DartId>>,
        markers: Option<Markers>,
    ) -> Self {
        let mut d = Diagram { opposite, inward, free_circles, merges, markers };
        d.normalize_merges();
        d
    }

    pub fn crossing_count(&self) -> usize {
        self.opposite.len() / 4
    }

    pub fn dart_count(&self) -> usize {
        self.opposite.len()
    }

    pub fn edge_count(&self) -> usize {
        self.opposite.len() / 2
    }

    pub fn free_circles(&self) -> usize {
        self.free_circles
    }

    pub fn markers(&self) -> Option<&Markers> {
        self.markers.as_ref()
    }

    pub(crate) fn merges(&self) -> &[Vec<DartId>] {
        &self.merges
    }

    pub fn crossing_of(&self, d: DartId) -> CrossingId {
        d / 4
    }

    pub fn slot_of(&self, d: DartId) -> usize {
        d % 4
    }

    pub fn dart(&self, c: CrossingId, slot: usize) -> DartId {
        4 * c + (slot % 4)
    }

    pub fn opposite(&self, d: DartId) -> DartId {
        self.opposite[d]
    }

    pub fn is_inward(&self, d: DartId) -> bool {
        self.inward[d]
    }

    /// Counterclockwise successor at the same crossing.
    pub fn rotation_next(&self, d: DartId) -> DartId {
        4 * (d / 4) + (d + 1) % 4
    }

    /// The dart of the same strand on the far side of the crossing.
    pub fn through(&self, d: DartId) -> DartId {
        4 * (d / 4) + (d + 2) % 4
    }

    /// Face-walk successor; keeps the face on the right of the traversal.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.rotation_next(self.opposite[d])
    }

    /// Strand successor over inward darts: continue through the crossing and
    /// follow the outgoing edge to its far (inward) end.
    pub fn strand_next(&self, d_in: DartId) -> DartId {
        self.opposite[self.through(d_in)]
    }

    /// Face walks; every dart appears in exactly one. Walks start at their
    /// smallest dart and are listed in order of that dart.
    pub fn faces(&self) -> Vec<Vec<DartId>> {
        let mut seen = vec![false; self.dart_count()];
        let mut out = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                walk.push(d);
                d = self.face_next(d);
            }
            out.push(walk);
        }
        out
    }

    /// Face index of every dart, matching the order of `faces()`.
    pub fn face_of(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.dart_count()];
        for (i, walk) in self.faces().iter().enumerate() {
            for &d in walk {
                out[d] = i;
            }
        }
        out
    }

    /// Region index per face after applying merges. Regions are the true
    /// spherical faces of the (possibly disconnected) diagram.
    pub fn region_of_face(&self) -> Vec<usize> {
        let faces = self.faces();
        let face_of = self.face_of();
        let mut uf = UnionFind::new(faces.len());
        for group in &self.merges {
            for pair in group.windows(2) {
                uf.union(face_of[pair[0]], face_of[pair[1]]);
            }
        }
        uf.compress()
    }

    /// Number of true spherical regions, counting each free circle as
    /// splitting one region in two.
    pub fn region_count(&self) -> usize {
        let base = if self.dart_count() == 0 {
            1
        } else {
            let rof = self.region_of_face();
            rof.iter().collect::<BTreeSet<_>>().len()
        };
        base + self.free_circles
    }

    /// Strand walks: the immersed circles passing through crossings. Each is
    /// returned as its cycle of inward darts.
    pub fn strand_circles(&self) -> Vec<Vec<DartId>> {
        let mut seen = vec![false; self.dart_count()];
        let mut out = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] || !self.inward[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                cycle.push(d);
                d = self.strand_next(d);
            }
            out.push(cycle);
        }
        out
    }

    /// Total number of circle components, free circles included.
    pub fn components(&self) -> usize {
        self.strand_circles().len() + self.free_circles
    }

    /// Connected-component id per crossing (edges connect crossings).
    pub fn map_components(&self) -> Vec<usize> {
        let n = self.crossing_count();
        let mut uf = UnionFind::new(n);
        for d in 0..self.dart_count() {
            uf.union(d / 4, self.opposite[d] / 4);
        }
        uf.compress()
    }

    /// All structural violations; empty iff the diagram is a valid oriented
    /// 4-valent map on the sphere.
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let n = self.dart_count();
        if n % 4 != 0 || self.inward.len() != n {
            errs.push(format!("dart table sizes inconsistent ({n} darts)"));
            return errs;
        }
        for d in 0..n {
            let o = self.opposite[d];
            if o >= n {
                errs.push(format!("dart {d}: opposite {o} out of range"));
                return errs;
            }
            if o == d {
                errs.push(format!("dart {d}: paired with itself"));
            } else if self.opposite[o] != d {
                errs.push(format!("dart {d}: edge pairing is not an involution"));
            } else if self.inward[d] == self.inward[o] {
                errs.push(format!(
                    "edge ({d},{o}): both ends {}",
                    if self.inward[d] { "inward" } else { "outward" }
                ));
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        for c in 0..self.crossing_count() {
            for s in [0usize, 1] {
                let a = self.dart(c, s);
                let b = self.dart(c, s + 2);
                if self.inward[a] == self.inward[b] {
                    errs.push(format!(
                        "crossing {c}: strand through slots {s},{} not oriented transversely",
                        s + 2
                    ));
                }
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        // Per-component Euler characteristic from the rotation system.
        let comp = self.map_components();
        let ncomp = comp.iter().collect::<BTreeSet<_>>().len();
        if ncomp > 0 {
            let faces = self.faces();
            let mut v = vec![0isize; ncomp];
            let mut e = vec![0isize; ncomp];
            let mut f = vec![0isize; ncomp];
            for c in 0..self.crossing_count() {
                v[comp[c]] += 1;
            }
            for d in 0..n {
                if d < self.opposite[d] {
                    e[comp[d / 4]] += 1;
                }
            }
            for walk in &faces {
                f[comp[walk[0] / 4]] += 1;
            }
            for k in 0..ncomp {
                let chi = v[k] - e[k] + f[k];
                if chi != 2 {
                    errs.push(format!("Euler characteristic {chi}, expected 2"));
                }
            }
            // Region structure: the bipartite face-incidence of components
            // and regions must form a tree, and no region may meet one
            // component in two faces.
            for group in &self.merges {
                if group.len() < 2 {
                    errs.push("merge group with fewer than two faces".to_string());
                }
                for &d in group {
                    if d >= n {
                        errs.push(format!("merge anchor {d} out of range"));
                        return errs;
                    }
                }
            }
            let rof = self.region_of_face();
            let nregions = rof.iter().collect::<BTreeSet<_>>().len();
            let mut region_comps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nregions];
            for (face, walk) in faces.iter().enumerate() {
                let k = comp[walk[0] / 4];
                if !region_comps[rof[face]].insert(k) {
                    errs.push(format!(
                        "region {} meets component {k} in more than one face",
                        rof[face]
                    ));
                }
            }
            let total_faces = faces.len();
            if errs.is_empty() && total_faces != nregions + ncomp - 1 {
                errs.push(format!(
                    "region structure is not spherical: {total_faces} faces, {nregions} regions, {ncomp} components"
                ));
            }
            if errs.is_empty() && ncomp > 1 {
                // Connectivity of the bipartite incidence graph.
                let mut uf = UnionFind::new(nregions + ncomp);
                for (face, walk) in faces.iter().enumerate() {
                    uf.union(rof[face], nregions + comp[walk[0] / 4]);
                }
                let roots = (0..nregions + ncomp)
                    .map(|i| uf.find(i))
                    .collect::<BTreeSet<_>>();
                if roots.len() != 1 {
                    errs.push("region structure is disconnected".to_string());
                }
            }
        }
        if let Some(m) = &self.markers {
            for &d in m.p.iter().chain(m.q.iter()) {
                if d >= n {
                    errs.push(format!("marker dart {d} does not exist"));
                }
            }
        }
        errs
    }

    pub(crate) fn normalize_merges(&mut self) {
        let face_of = self.face_of();
        let faces = self.faces();
        let mut uf = UnionFind::new(faces.len());
        for group in &self.merges {
            for pair in group.windows(2) {
                uf.union(face_of[pair[0]], face_of[pair[1]]);
            }
        }
        let classes = uf.compress();
        let mut groups: Vec<Vec<DartId>> = Vec::new();
        let nclasses = classes.iter().collect::<BTreeSet<_>>().len();
        let mut by_class: Vec<Vec<DartId>> = vec![Vec::new(); nclasses];
        for (face, walk) in faces.iter().enumerate() {
            by_class[classes[face]].push(walk[0]);
        }
        for mut g in by_class {
            if g.len() >= 2 {
                g.sort_unstable();
                groups.push(g);
            }
        }
        groups.sort();
        self.merges = groups;
    }

    /// Remove a set of crossings, resplicing every strand that ran through
    /// them. Strand threads living entirely inside the removed set become
    /// free circles. Region merges are rebuilt by tracking surviving darts;
    /// removals only ever merge regions, so the surviving darts of one old
    /// region vote its guests into the correct new region.
    pub(crate) fn excise(&self, dead: &BTreeSet<CrossingId>) -> Diagram {
        let old_faces = self.faces();
        let old_rof = self.region_of_face();

        let nold = self.crossing_count();
        let mut new_of_old = vec![usize::MAX; nold];
        let mut kept = 0usize;
        for c in 0..nold {
            if !dead.contains(&c) {
                new_of_old[c] = kept;
                kept += 1;
            }
        }
        let dart_map = |d: DartId| -> Option<DartId> {
            let c = d / 4;
            if dead.contains(&c) {
                None
            } else {
                Some(4 * new_of_old[c] + d % 4)
            }
        };

        let mut opposite = vec![usize::MAX; 4 * kept];
        let mut inward = vec![false; 4 * kept];
        for d in 0..self.dart_count() {
            if let Some(nd) = dart_map(d) {
                inward[nd] = self.inward[d];
            }
        }
        let mut extra_circles = 0usize;
        let mut consumed = vec![false; self.dart_count()];
        for d in 0..self.dart_count() {
            if dart_map(d).is_none() {
                continue;
            }
            let nd = dart_map(d).unwrap();
            if opposite[nd] != usize::MAX {
                continue;
            }
            // Follow the strand through dead crossings until it emerges.
            let mut e = self.opposite[d];
            while dart_map(e).is_none() {
                consumed[e] = true;
                let t = self.through(e);
                consumed[t] = true;
                e = self.opposite[t];
            }
            let ne = dart_map(e).unwrap();
            opposite[nd] = ne;
            opposite[ne] = nd;
        }
        // Threads never emerging: closed circles within the dead region.
        for d in 0..self.dart_count() {
            if dart_map(d).is_some() || consumed[d] || !self.inward[d] {
                continue;
            }
            let mut e = d;
            loop {
                consumed[e] = true;
                consumed[self.through(e)] = true;
                e = self.opposite[self.through(e)];
                if e == d {
                    break;
                }
            }
            extra_circles += 1;
        }

        let mut next = Diagram {
            opposite,
            inward,
            free_circles: self.free_circles + extra_circles,
            merges: Vec::new(),
            markers: None,
        };
        // Regions: union new faces that inherit darts from one old region.
        let new_face_of = next.face_of();
        let new_faces = next.faces();
        let mut uf = UnionFind::new(new_faces.len());
        let nregions = old_rof.iter().collect::<BTreeSet<_>>().len().max(1);
        let mut touch: Vec<Option<usize>> = vec![None; nregions];
        for (face, walk) in old_faces.iter().enumerate() {
            let region = old_rof[face];
            for &d in walk {
                if let Some(nd) = dart_map(d) {
                    let nf = new_face_of[nd];
                    match touch[region] {
                        None => touch[region] = Some(nf),
                        Some(first) => {
                            uf.union(first, nf);
                        }
                    }
                }
            }
        }
        let classes = uf.compress();
        let nclasses = classes.iter().collect::<BTreeSet<_>>().len();
        let mut groups: Vec<Vec<DartId>> = vec![Vec::new(); nclasses];
        for (face, walk) in new_faces.iter().enumerate() {
            groups[classes[face]].push(walk[0]);
        }
        next.merges = groups.into_iter().filter(|g| g.len() >= 2).collect();
        next.normalize_merges();
        next
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canon::canonical_code(self)
    }

    pub fn seifert_smooth(&self) -> SeifertFamily {
        smooth::seifert_smooth(self)
    }

    pub fn smoothing(&self) -> Smoothing {
        smooth::smoothing(self)
    }

    /// Builder access for move surgeries in the `moves` module.
    pub(crate) fn parts(&self) -> (Vec<DartId>, Vec<bool>, usize, Vec<Vec<DartId>>) {
        (
            self.opposite.clone(),
            self.inward.clone(),
            self.free_circles,
            self.merges.clone(),
        )
    }

    pub(crate) fn with_free_circles(&self, free_circles: usize) -> Diagram {
        let mut d = self.clone();
        d.free_circles = free_circles;
        d
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Compact class ids in order of first appearance.
    pub fn compress(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0usize; n];
        for x in 0..n {
            let r = self.find(x);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[x] = ids[r];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twinword::TwinWord;

    fn closure_of(text: &str) -> Diagram {
        closure(&text.parse::<TwinWord>().unwrap())
    }

    #[test]
    fn kink_map_structure() {
        // closure(s1): one crossing, a figure-eight on the sphere.
        let d = closure_of("tw 2: s1");
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.free_circles(), 0);
        assert!(d.validate().is_empty());
        let faces = d.faces();
        assert_eq!(faces.len(), 3);
        let lengths: Vec<usize> = {
            let mut v: Vec<usize> = faces.iter().map(|f| f.len()).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(lengths, vec![1, 1, 2]);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn lens_map_structure() {
        let d = closure_of("tw 2: s1 s1");
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.edge_count(), 4);
        assert!(d.validate().is_empty());
        let faces = d.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 2));
        assert_eq!(d.components(), 2);
    }

    #[test]
    fn empty_closure_counts_regions() {
        let d = closure_of("tw 1:");
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.free_circles(), 1);
        assert_eq!(d.region_count(), 2);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn torus_like_rotation_system_rejected() {
        // One crossing with the two strand pairs joined straight across:
        // only embeddable on the torus, so Euler fails.
        let d = Diagram::from_parts(
            vec![2, 3, 0, 1],
            vec![true, true, false, false],
            0,
            Vec::new(),
            None,
        );
        let errs = d.validate();
        assert!(
            errs.iter().any(|e| e.contains("Euler characteristic 0")),
            "got {errs:?}"
        );
    }

    #[test]
    fn disconnected_closure_needs_merges() {
        let d = closure_of("tw 5: s1 s1 s4 s4");
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(d.free_circles(), 1);
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        // Two lens components and one merged region between them.
        assert_eq!(d.merges().len(), 1);
        assert_eq!(d.components(), 5);
        // 8 traced faces, 7 true regions, plus the free circle.
        assert_eq!(d.faces().len(), 8);
        assert_eq!(d.region_count(), 7 + 1);
    }

    #[test]
    fn excise_dissolving_component_frees_circles() {
        let d = closure_of("tw 2: s1 s1");
        let gone = d.excise(&BTreeSet::from([0usize, 1usize]));
        assert_eq!(gone.crossing_count(), 0);
        assert_eq!(gone.free_circles(), 2);
        assert!(gone.validate().is_empty());
    }

    #[test]
    fn excise_keeps_other_component() {
        let d = closure_of("tw 5: s1 s1 s4 s4");
        let gone = d.excise(&BTreeSet::from([0usize, 1usize]));
        assert_eq!(gone.crossing_count(), 2);
        assert_eq!(gone.free_circles(), 3);
        assert!(gone.validate().is_empty(), "{:?}", gone.validate());
        assert!(gone.merges().is_empty());
    }

    #[test]
    fn strand_walks_match_permutation_cycles() {
        for text in [
            "tw 2: s1",
            "tw 2: s1 s1",
            "tw 3: s1 s2",
            "tw 3: s1 s2 s1",
            "tw 4: s1 s3 s2 s1",
            "tw 5: s1 s1 s4 s4",
        ] {
            let w: TwinWord = text.parse().unwrap();
            let d = closure(&w);
            assert_eq!(
                d.components(),
                w.permutation().cycle_count(),
                "component mismatch for {text}"
            );
        }
    }
}
