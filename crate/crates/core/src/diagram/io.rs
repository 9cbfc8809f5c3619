//! Diagram file format.
//!
//! JSON object with keys, in order: `crossings` (array of 4-element dart-id
//! rotations, counterclockwise), `edges` (array of dart-id pairs),
//! `dart_directions` (object mapping dart id to `"in"`/`"out"`),
//! `free_circles`, optional `markers`, and `face_merges` (arrays of dart
//! ids whose faces bound one region) — required exactly when the crossing
//! part is disconnected. Dart ids may be arbitrary distinct integers on
//! input; the writer emits the structural numbering. Every invariant is
//! checked on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError, Markers};

#[derive(Debug, Serialize, Deserialize)]
pub struct DiagramFile {
    pub crossings: Vec<[u64; 4]>,
    pub edges: Vec<[u64; 2]>,
    pub dart_directions: BTreeMap<String, String>,
    pub free_circles: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub markers: Option<MarkersFile>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub face_merges: Vec<Vec<u64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MarkersFile {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
}

pub fn write_diagram(d: &Diagram) -> String {
    let crossings: Vec<[u64; 4]> = (0..d.crossing_count())
        .map(|c| [0, 1, 2, 3].map(|s| (4 * c + s) as u64))
        .collect();
    let mut edges: Vec<[u64; 2]> = (0..d.dart_count())
        .filter(|&x| x < d.opposite(x))
        .map(|x| [x as u64, d.opposite(x) as u64])
        .collect();
    edges.sort_unstable();
    let dart_directions = (0..d.dart_count())
        .map(|x| {
            (
                x.to_string(),
                if d.is_inward(x) { "in" } else { "out" }.to_string(),
            )
        })
        .collect();
    let markers = d.markers().map(|m| MarkersFile {
        p: m.p.iter().map(|&x| x as u64).collect(),
        q: m.q.iter().map(|&x| x as u64).collect(),
    });
    let face_merges = d
        .merges()
        .iter()
        .map(|g| g.iter().map(|&x| x as u64).collect())
        .collect();
    let file = DiagramFile {
        crossings,
        edges,
        dart_directions,
        free_circles: d.free_circles(),
        markers,
        face_merges,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("diagram serializes");
    text.push('\n');
    text
}

pub fn read_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let file: DiagramFile =
        serde_json::from_str(text).map_err(|e| DiagramError::Io(e.to_string()))?;
    // External dart ids -> structural ids 4c + slot.
    let mut internal: BTreeMap<u64, usize> = BTreeMap::new();
    for (c, rot) in file.crossings.iter().enumerate() {
        for (s, &ext) in rot.iter().enumerate() {
            if internal.insert(ext, 4 * c + s).is_some() {
                return Err(DiagramError::Invalid(format!(
                    "dart id {ext} appears in more than one rotation slot"
                )));
            }
        }
    }
    let ndarts = 4 * file.crossings.len();
    let lookup = |ext: u64| -> Result<usize, DiagramError> {
        internal
            .get(&ext)
            .copied()
            .ok_or_else(|| DiagramError::Invalid(format!("unknown dart id {ext}")))
    };
    let mut opposite = vec![usize::MAX; ndarts];
    for &[a, b] in &file.edges {
        let (ia, ib) = (lookup(a)?, lookup(b)?);
        if ia == ib || opposite[ia] != usize::MAX || opposite[ib] != usize::MAX {
            return Err(DiagramError::Invalid(format!("edge [{a},{b}] is not a simple pairing")));
        }
        opposite[ia] = ib;
        opposite[ib] = ia;
    }
    if opposite.iter().any(|&o| o == usize::MAX) {
        return Err(DiagramError::Invalid("some dart has no edge".to_string()));
    }
    let mut inward = vec![false; ndarts];
    let mut seen = vec![false; ndarts];
    for (key, dir) in &file.dart_directions {
        let ext: u64 = key
            .parse()
            .map_err(|_| DiagramError::Invalid(format!("bad dart key {key:?}")))?;
        let i = lookup(ext)?;
        seen[i] = true;
        inward[i] = match dir.as_str() {
            "in" => true,
            "out" => false,
            other => {
                return Err(DiagramError::Invalid(format!(
                    "dart {ext}: direction {other:?} (expected \"in\" or \"out\")"
                )))
            }
        };
    }
    if seen.iter().any(|&s| !s) {
        return Err(DiagramError::Invalid("some dart has no direction".to_string()));
    }
    let merges = file
        .face_merges
        .iter()
        .map(|g| g.iter().map(|&x| lookup(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let markers = match file.markers {
        None => None,
        Some(m) => Some(Markers {
            p: m.p.iter().map(|&x| lookup(x)).collect::<Result<Vec<_>, _>>()?,
            q: m.q.iter().map(|&x| lookup(x)).collect::<Result<Vec<_>, _>>()?,
        }),
    };
    let d = Diagram::from_parts(opposite, inward, file.free_circles, merges, markers);
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(DiagramError::Invalid(violations.join("; ")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::closure;
    use crate::twinword::TwinWord;

    fn closure_of(text: &str) -> Diagram {
        closure(&text.parse::<TwinWord>().unwrap())
    }

    #[test]
    fn round_trip_preserves_code() {
        for text in ["tw 2: s1", "tw 3: s1 s2 s1", "tw 5: s1 s1 s4 s4", "tw 4:"] {
            let d = closure_of(text);
            let json = write_diagram(&d);
            let back = read_diagram(&json).expect("written diagrams parse");
            assert_eq!(back.canonical_code(), d.canonical_code(), "{text}");
            assert_eq!(back.free_circles(), d.free_circles());
        }
    }

    #[test]
    fn arbitrary_labels_accepted() {
        let json = r#"{
            "crossings": [[10, 20, 30, 40]],
            "edges": [[30, 20], [40, 10]],
            "dart_directions": {"10": "in", "20": "in", "30": "out", "40": "out"},
            "free_circles": 0
        }"#;
        let d = read_diagram(json).expect("valid kink");
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(d.canonical_code(), closure_of("tw 2: s1").canonical_code());
    }

    #[test]
    fn invalid_files_are_rejected() {
        // Torus-like pairing: strand partners joined straight across.
        let torus = r#"{
            "crossings": [[0, 1, 2, 3]],
            "edges": [[0, 2], [1, 3]],
            "dart_directions": {"0": "in", "1": "in", "2": "out", "3": "out"},
            "free_circles": 0
        }"#;
        assert!(read_diagram(torus).is_err());
        let missing_edge = r#"{
            "crossings": [[0, 1, 2, 3]],
            "edges": [[0, 1]],
            "dart_directions": {"0": "in", "1": "in", "2": "out", "3": "out"},
            "free_circles": 0
        }"#;
        assert!(read_diagram(missing_edge).is_err());
        assert!(read_diagram("not json").is_err());
    }

    #[test]
    fn key_order_is_stable() {
        let d = closure_of("tw 2: s1");
        let json = write_diagram(&d);
        let c = json.find("\"crossings\"").unwrap();
        let e = json.find("\"edges\"").unwrap();
        let dd = json.find("\"dart_directions\"").unwrap();
        let fc = json.find("\"free_circles\"").unwrap();
        assert!(c < e && e < dd && dd < fc);
        // Byte-identical across runs.
        assert_eq!(json, write_diagram(&d));
    }
}
