//! JSON document form of a representation.

use serde::{Deserialize, Serialize};

use super::{
    ConstructionError, ConstructionParams, Disk, DiskLabel, GadgetKind, Part, Representation,
    ScaledPoint, SetId, MAX_COORD, UNITS_PER_RADIUS,
};
use crate::formula::Formula;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    units_per_radius: i64,
    params: ConstructionParams,
    formula: Option<Formula>,
    disks: Vec<DiskRow>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskRow {
    i: u32,
    j: u8,
    ordinal: u32,
    kind: GadgetKind,
    part: Part,
    member: u32,
    x: i64,
    y: i64,
}

pub fn serialize_representation(r: &Representation) -> String {
    let doc = Document {
        version: DOCUMENT_VERSION,
        units_per_radius: UNITS_PER_RADIUS,
        params: r.params.clone(),
        formula: r.formula.as_ref().map(Formula::canonical),
        disks: r
            .disks
            .iter()
            .map(|d| DiskRow {
                i: d.label.set.i,
                j: d.label.set.j,
                ordinal: d.label.ordinal,
                kind: d.label.kind,
                part: d.label.part,
                member: d.label.member,
                x: d.center.x,
                y: d.center.y,
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&doc).expect("document serializes");
    text.push('\n');
    text
}

pub fn parse_representation(text: &str) -> Result<Representation, ConstructionError> {
    let probe: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConstructionError::Malformed(e.to_string()))?;
    match probe.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == DOCUMENT_VERSION as u64 => {}
        Some(v) => return Err(ConstructionError::VersionMismatch(v as u32)),
        None => return Err(ConstructionError::Malformed("missing version".into())),
    }
    let doc: Document =
        serde_json::from_value(probe).map_err(|e| ConstructionError::Malformed(e.to_string()))?;
    if doc.units_per_radius != UNITS_PER_RADIUS {
        return Err(ConstructionError::Malformed(format!(
            "units_per_radius {} (expected {UNITS_PER_RADIUS})",
            doc.units_per_radius
        )));
    }
    doc.params.validate()?;
    let params = doc.params;
    let invariant = |msg: String| Err(ConstructionError::Invariant(msg));
    if doc.disks.len() as u64 != params.total_disks() {
        return invariant(format!(
            "{} disks, expected 8n(n+1)(b+1) = {}",
            doc.disks.len(),
            params.total_disks()
        ));
    }
    let mut disks = Vec::with_capacity(doc.disks.len());
    for row in doc.disks {
        if row.i == 0 || row.i as usize > params.n || row.j > 1 {
            return invariant(format!("set ({},{}) out of range", row.i, row.j));
        }
        if row.x.abs() > MAX_COORD || row.y.abs() > MAX_COORD {
            return invariant(format!(
                "coordinate ({}, {}) outside the guard",
                row.x, row.y
            ));
        }
        disks.push(Disk {
            label: DiskLabel {
                set: SetId::new(row.i, row.j),
                ordinal: row.ordinal,
                part: row.part,
                member: row.member,
                kind: row.kind,
            },
            center: ScaledPoint::new(row.x, row.y),
        });
    }
    disks.sort_unstable_by_key(|d| d.label);
    if let Some(w) = disks.windows(2).find(|w| w[0].label == w[1].label) {
        return invariant(format!("duplicate label {:?}", w[0].label));
    }
    if let Some(f) = &doc.formula {
        if f.n() != params.n {
            return invariant(format!(
                "formula over {} variables, params n = {}",
                f.n(),
                params.n
            ));
        }
    }
    Ok(Representation {
        params,
        disks,
        formula: doc.formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{apply_clause_shifts, build_representation};
    use crate::formula::parse_formula;

    #[test]
    fn round_trip_preserves_everything() {
        let p = ConstructionParams::new(3, 2, 5);
        let r = apply_clause_shifts(
            &build_representation(&p).unwrap(),
            &parse_formula("1 2\n2 3").unwrap(),
        )
        .unwrap();
        let text = serialize_representation(&r);
        let back = parse_representation(&text).unwrap();
        assert_eq!(back.params, r.params);
        assert_eq!(back.disks, r.disks);
        assert_eq!(back.formula.unwrap(), r.formula.unwrap().canonical());
        assert_eq!(
            serialize_representation(&parse_representation(&text).unwrap()),
            text
        );
    }

    #[test]
    fn integer_coordinates_in_declared_units() {
        let r = build_representation(&ConstructionParams::new(1, 1, 1)).unwrap();
        let text = serialize_representation(&r);
        assert!(text.contains("\"units_per_radius\":10000"));
        assert!(text.contains("\"x\":9000,\"y\":0"));
    }

    #[test]
    fn rejects_bad_documents() {
        let r = build_representation(&ConstructionParams::new(1, 1, 1)).unwrap();
        let text = serialize_representation(&r);
        let bumped = text.replacen("\"version\":1", "\"version\":2", 1);
        assert_eq!(
            parse_representation(&bumped),
            Err(ConstructionError::VersionMismatch(2))
        );
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v["disks"].as_array_mut().unwrap().pop();
        assert!(matches!(
            parse_representation(&v.to_string()),
            Err(ConstructionError::Invariant(_))
        ));
        assert!(matches!(
            parse_representation("{\"version\":1}"),
            Err(ConstructionError::Malformed(_))
        ));
        assert!(matches!(
            parse_representation("not json"),
            Err(ConstructionError::Malformed(_))
        ));
    }
}
