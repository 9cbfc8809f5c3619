//! Canonical codes: byte strings equal exactly for diagrams related by an
//! orientation-preserving homeomorphism of the sphere together with shifts
//! of crossing-free circles (which enter only as a count).
//!
//! A connected component is encoded by a rooted breadth-first map code:
//! crossings are numbered in discovery order, each anchored at its arrival
//! dart, and every slot records its flow direction and the discovery
//! coordinates of the opposite dart. Hosting is encoded recursively along
//! the region tree; the final code is the minimum over every choice of root
//! component and root dart.

use std::collections::BTreeMap;
use std::fmt;

use super::{DartId, Diagram};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

struct Ctx<'a> {
    d: &'a Diagram,
    face_of: Vec<usize>,
    faces: Vec<Vec<DartId>>,
    region_of_face: Vec<usize>,
    faces_in_region: Vec<Vec<usize>>,
}

fn push_u32(out: &mut Vec<u8>, x: usize) {
    out.extend_from_slice(&(x as u32).to_le_bytes());
}

/// Rooted code of one component plus, recursively, everything hosted in its
/// regions other than the entry region.
fn encode_from(ctx: &Ctx, d0: DartId, entry_face: Option<usize>) -> Vec<u8> {
    let d = ctx.d;
    let mut crossing_num: BTreeMap<usize, (usize, usize)> = BTreeMap::new(); // c -> (number, anchor slot)
    let mut order: Vec<usize> = Vec::new();
    crossing_num.insert(d0 / 4, (0, d0 % 4));
    order.push(d0 / 4);
    let mut out = Vec::new();
    let mut idx = 0;
    while idx < order.len() {
        let c = order[idx];
        idx += 1;
        let (_, anchor) = crossing_num[&c];
        for rel in 0..4 {
            let dart = 4 * c + (anchor + rel) % 4;
            out.push(d.is_inward(dart) as u8);
            let o = d.opposite(dart);
            let oc = o / 4;
            let (onum, oanchor) = match crossing_num.get(&oc) {
                Some(&v) => v,
                None => {
                    let v = (order.len(), o % 4);
                    crossing_num.insert(oc, v);
                    order.push(oc);
                    v
                }
            };
            push_u32(&mut out, onum);
            out.push(((o % 4 + 4 - oanchor) % 4) as u8);
        }
    }
    // Faces of this component keyed by their minimal discovery coordinate.
    let mut face_key: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (&c, &(num, anchor)) in &crossing_num {
        for rel in 0..4 {
            let dart = 4 * c + (anchor + rel) % 4;
            let face = ctx.face_of[dart];
            let key = (num, rel);
            face_key
                .entry(face)
                .and_modify(|k| {
                    if key < *k {
                        *k = key;
                    }
                })
                .or_insert(key);
        }
    }
    let mut ordered: Vec<(usize, usize, usize)> =
        face_key.iter().map(|(&f, &(a, b))| (a, b, f)).collect();
    ordered.sort_unstable();
    push_u32(&mut out, ordered.len());
    for (a, b, face) in ordered {
        push_u32(&mut out, a);
        out.push(b as u8);
        if Some(face) == entry_face {
            out.push(0xEE); // entry region is owned by the parent
            continue;
        }
        let region = ctx.region_of_face[face];
        let mut guest_codes: Vec<Vec<u8>> = Vec::new();
        for &guest in &ctx.faces_in_region[region] {
            if guest == face {
                continue;
            }
            let code = ctx.faces[guest]
                .iter()
                .map(|&gd| encode_from(ctx, gd, Some(guest)))
                .min()
                .expect("face walk is nonempty");
            guest_codes.push(code);
        }
        guest_codes.sort();
        push_u32(&mut out, guest_codes.len());
        for code in guest_codes {
            push_u32(&mut out, code.len());
            out.extend_from_slice(&code);
        }
    }
    out
}

pub fn canonical_code(d: &Diagram) -> CanonicalCode {
    let mut out = vec![b'D'];
    push_u32(&mut out, d.free_circles());
    if d.dart_count() == 0 {
        return CanonicalCode(out);
    }
    let faces = d.faces();
    let face_of = d.face_of();
    let region_of_face = d.region_of_face();
    let nregions = region_of_face.iter().max().copied().unwrap_or(0) + 1;
    let mut faces_in_region: Vec<Vec<usize>> = vec![Vec::new(); nregions];
    for (face, &region) in region_of_face.iter().enumerate() {
        faces_in_region[region].push(face);
    }
    let ctx = Ctx { d, face_of, faces, region_of_face, faces_in_region };

    let best = (0..d.dart_count())
        .map(|d0| encode_from(&ctx, d0, None))
        .min()
        .expect("diagram has darts");
    out.extend_from_slice(&best);
    CanonicalCode(out)
}

impl Diagram {
    /// Rebuild the diagram with crossings permuted and each rotation started
    /// at a different slot. The result is the same map under different
    /// labels; canonical codes must agree.
    pub fn relabelled(&self, crossing_perm: &[usize], slot_shift: &[usize]) -> Diagram {
        let n = self.crossing_count();
        assert_eq!(crossing_perm.len(), n);
        assert_eq!(slot_shift.len(), n);
        let map = |d: DartId| -> DartId {
            let c = d / 4;
            4 * crossing_perm[c] + (d % 4 + slot_shift[c]) % 4
        };
        let mut opposite = vec![usize::MAX; self.dart_count()];
        let mut inward = vec![false; self.dart_count()];
        for d in 0..self.dart_count() {
            opposite[map(d)] = map(self.opposite(d));
            inward[map(d)] = self.is_inward(d);
        }
        let merges = self
            .merges()
            .iter()
            .map(|g| g.iter().map(|&d| map(d)).collect())
            .collect();
        Diagram::from_parts(opposite, inward, self.free_circles(), merges, None)
    }
}
