//! Key-value design files.
//!
//! ```text
//! # comment
//! [series]
//! rm = 7.712
//! lm = 2.4545e-9
//! ...
//! [filter]
//! z0 = 50
//! topology = shunt, series, shunt
//! ```
//!
//! Sections are `[series]` and `[shunt]` (one resonator record each),
//! `[filter]` (port impedance and element order) and `[spec]` (synthesis
//! targets). Values are SI decimals. Unknown sections or keys, duplicates,
//! missing keys and malformed numbers are errors carrying a line number.

use std::fmt::Write as _;

use crate::error::{format_err, Result};
use crate::mbvd::MbvdParams;
use crate::network::{ElementKind, LadderDesign, LadderElement};
use crate::synthesis::DesignSpec;

const RESONATOR_KEYS: [&str; 7] = ["rm", "lm", "cm", "c0", "rs", "ls", "r0"];
const FILTER_KEYS: [&str; 2] = ["z0", "topology"];
const SPEC_KEYS: [&str; 9] = [
    "fc_target",
    "fbw_target",
    "z0",
    "oob_min_db",
    "k2",
    "q",
    "rs",
    "ls",
    "il_max_db",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSection {
    pub z0: f64,
    pub topology: Vec<ElementKind>,
}

/// Parsed design file. Absent sections are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DesignDocument {
    pub series: Option<MbvdParams>,
    pub shunt: Option<MbvdParams>,
    pub filter: Option<FilterSection>,
    pub spec: Option<DesignSpec>,
}

struct Entry<'a> {
    key: &'a str,
    value: &'a str,
    line: usize,
}

struct Section<'a> {
    name: &'a str,
    line: usize,
    entries: Vec<Entry<'a>>,
}

impl<'a> Section<'a> {
    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (i, e) in self.entries.iter().enumerate() {
            if !allowed.contains(&e.key) {
                return Err(format_err(
                    e.line,
                    format!("unknown key '{}' in [{}]", e.key, self.name),
                ));
            }
            if self.entries[..i].iter().any(|prev| prev.key == e.key) {
                return Err(format_err(e.line, format!("duplicate key '{}'", e.key)));
            }
        }
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&Entry<'a>> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn number(&self, key: &str) -> Result<f64> {
        let e = self.raw(key).ok_or_else(|| {
            format_err(self.line, format!("[{}] is missing key '{key}'", self.name))
        })?;
        parse_number(e.value, e.line)
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.raw(key) {
            Some(e) => parse_number(e.value, e.line),
            None => Ok(default),
        }
    }
}

fn parse_number(value: &str, line: usize) -> Result<f64> {
    match value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format_err(line, format!("malformed number '{value}'"))),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section<'_>>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(inner) = content.strip_prefix('[') {
            let name = inner
                .strip_suffix(']')
                .ok_or_else(|| format_err(line, "unterminated section header"))?
                .trim();
            if !matches!(name, "series" | "shunt" | "filter" | "spec") {
                return Err(format_err(line, format!("unknown section [{name}]")));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(format_err(line, format!("duplicate section [{name}]")));
            }
            sections.push(Section {
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            format_err(line, format!("expected 'key = value', found '{content}'"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(format_err(line, "empty key or value"));
        }
        let section = sections
            .last_mut()
            .ok_or_else(|| format_err(line, format!("key '{key}' outside any section")))?;
        section.entries.push(Entry { key, value, line });
    }
    Ok(sections)
}

fn resonator(s: &Section) -> Result<MbvdParams> {
    s.check_keys(&RESONATOR_KEYS)?;
    let p = MbvdParams {
        rm: s.number("rm")?,
        lm: s.number("lm")?,
        cm: s.number("cm")?,
        c0: s.number("c0")?,
        rs: s.number("rs")?,
        ls: s.number("ls")?,
        r0: s.number_or("r0", 0.0)?,
    };
    p.validate()
        .map_err(|e| format_err(s.line, format!("[{}]: {e}", s.name)))?;
    Ok(p)
}

fn filter(s: &Section) -> Result<FilterSection> {
    s.check_keys(&FILTER_KEYS)?;
    let z0 = s.number("z0")?;
    let entry = s
        .raw("topology")
        .ok_or_else(|| format_err(s.line, "[filter] is missing key 'topology'"))?;
    let topology = entry
        .value
        .split(',')
        .map(|t| match t.trim() {
            "series" => Ok(ElementKind::Series),
            "shunt" => Ok(ElementKind::Shunt),
            other => Err(format_err(entry.line, format!("unknown element '{other}'"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterSection { z0, topology })
}

fn spec(s: &Section) -> Result<DesignSpec> {
    s.check_keys(&SPEC_KEYS)?;
    Ok(DesignSpec {
        fc_target: s.number("fc_target")?,
        fbw_target: s.number("fbw_target")?,
        z0: s.number("z0")?,
        oob_min_db: s.number("oob_min_db")?,
        k2: s.number("k2")?,
        q: s.number("q")?,
        rs: s.number("rs")?,
        ls: s.number("ls")?,
        il_max_db: s.number("il_max_db")?,
    })
}

pub fn read_design(text: &str) -> Result<DesignDocument> {
    let mut doc = DesignDocument::default();
    for s in split_sections(text)? {
        match s.name {
            "series" => doc.series = Some(resonator(&s)?),
            "shunt" => doc.shunt = Some(resonator(&s)?),
            "filter" => doc.filter = Some(filter(&s)?),
            "spec" => doc.spec = Some(spec(&s)?),
            _ => unreachable!("section names are checked while splitting"),
        }
    }
    Ok(doc)
}

fn write_section(out: &mut String, name: &str, pairs: &[(&str, f64)]) {
    if !out.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(out, "[{name}]");
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v:e}");
    }
}

fn resonator_pairs(p: &MbvdParams) -> [(&'static str, f64); 7] {
    [
        ("rm", p.rm),
        ("lm", p.lm),
        ("cm", p.cm),
        ("c0", p.c0),
        ("rs", p.rs),
        ("ls", p.ls),
        ("r0", p.r0),
    ]
}

/// Serializes `doc`; [`read_design`] inverts it exactly.
pub fn write_design(doc: &DesignDocument) -> String {
    let mut out = String::new();
    if let Some(p) = &doc.series {
        write_section(&mut out, "series", &resonator_pairs(p));
    }
    if let Some(p) = &doc.shunt {
        write_section(&mut out, "shunt", &resonator_pairs(p));
    }
    if let Some(f) = &doc.filter {
        write_section(&mut out, "filter", &[("z0", f.z0)]);
        let names: Vec<&str> = f.topology.iter().map(|k| k.name()).collect();
        let _ = writeln!(out, "topology = {}", names.join(", "));
    }
    if let Some(s) = &doc.spec {
        write_section(
            &mut out,
            "spec",
            &[
                ("fc_target", s.fc_target),
                ("fbw_target", s.fbw_target),
                ("z0", s.z0),
                ("oob_min_db", s.oob_min_db),
                ("k2", s.k2),
                ("q", s.q),
                ("rs", s.rs),
                ("ls", s.ls),
                ("il_max_db", s.il_max_db),
            ],
        );
    }
    out
}

impl DesignDocument {
    /// Ladder described by the `[filter]` topology; each element uses the
    /// record of the section with its name.
    pub fn ladder(&self) -> Result<LadderDesign> {
        let f = self
            .filter
            .as_ref()
            .ok_or_else(|| format_err(0, "design has no [filter] section"))?;
        let mut resonators = Vec::new();
        let mut index_of = |kind: ElementKind| -> Result<usize> {
            let p = match kind {
                ElementKind::Series => self.series,
                ElementKind::Shunt => self.shunt,
            }
            .ok_or_else(|| {
                format_err(
                    0,
                    format!("topology uses [{}] but the section is absent", kind.name()),
                )
            })?;
            if let Some(i) = resonators.iter().position(|(k, _)| *k == kind) {
                return Ok(i);
            }
            resonators.push((kind, p));
            Ok(resonators.len() - 1)
        };
        let elements = f
            .topology
            .iter()
            .map(|&kind| {
                Ok(LadderElement {
                    kind,
                    resonator: index_of(kind)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LadderDesign::new(
            resonators.into_iter().map(|(_, p)| p).collect(),
            elements,
            f.z0,
        )
    }

    /// Document for `design`, which may use at most one record per element kind.
    pub fn from_ladder(design: &LadderDesign) -> Result<Self> {
        let mut doc = DesignDocument::default();
        for e in design.elements() {
            let p = *design.resonator_of(e);
            let slot = match e.kind {
                ElementKind::Series => &mut doc.series,
                ElementKind::Shunt => &mut doc.shunt,
            };
            match slot {
                Some(existing) if *existing != p => {
                    return Err(format_err(
                        0,
                        format!("design uses more than one {} record", e.kind.name()),
                    ));
                }
                _ => *slot = Some(p),
            }
        }
        doc.filter = Some(FilterSection {
            z0: design.z0(),
            topology: design.elements().iter().map(|e| e.kind).collect(),
        });
        Ok(doc)
    }
}
