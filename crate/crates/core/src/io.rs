//! JSON input formats and exact report encoding.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::blowup::BlowupSection;
use crate::bundles::SteinerResolution;
use crate::curves::RationalCurve;
use crate::error::{Error, Result};
use crate::kronecker::{KroneckerModule, QuaternionicData};
use crate::quadric::{QuadricLine, QuatTuple, RealLineData};

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn parse_curve(text: &str) -> Result<RationalCurve> {
    let c: RationalCurve = from_json(text)?;
    c.check_shape()?;
    Ok(c)
}

pub fn parse_resolution(text: &str) -> Result<SteinerResolution> {
    let r: SteinerResolution = from_json(text)?;
    r.check_shape()?;
    Ok(r)
}

/// Module file: the module fields plus optional quaternionic data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    #[serde(flatten)]
    pub module: KroneckerModule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quaternionic: Option<QuaternionicData>,
}

pub fn parse_module(text: &str) -> Result<ModuleFile> {
    let m: ModuleFile = from_json(text)?;
    m.module.check()?;
    Ok(m)
}

/// A line given by `(a, b, c, d)` or a real line by `(x, y)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LineFile {
    Line(QuadricLine),
    Real(RealLineData),
}

impl LineFile {
    pub fn to_line(&self) -> Result<QuadricLine> {
        match self {
            Self::Line(l) => QuadricLine::new(l.a.clone(), l.b.clone(), l.c.clone(), l.d.clone()),
            Self::Real(r) => RealLineData::new(r.x.clone(), r.y.clone())?.line(),
        }
    }
}

pub fn parse_line(text: &str) -> Result<LineFile> {
    from_json(text)
}

pub fn parse_tuple(text: &str) -> Result<QuatTuple> {
    from_json(text)
}

pub fn parse_section(text: &str) -> Result<BlowupSection> {
    let s: BlowupSection = from_json(text)?;
    BlowupSection::new(s.coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::twisted_cubic;

    #[test]
    fn curve_round_trip() {
        let text = to_json(&twisted_cubic());
        assert!(text.contains("\"ambient\": 3"));
        assert_eq!(parse_curve(&text).unwrap(), twisted_cubic());
    }

    #[test]
    fn line_formats() {
        let l = parse_line(r#"{"a":[1,0,0,0],"b":[0,1,0,0],"c":[0,0,1,0],"d":[0,0,0,1]}"#).unwrap();
        assert!(matches!(l, LineFile::Line(_)));
        let r = parse_line(r#"{"x":[1,0,0,0],"y":["0","1","0","0"]}"#).unwrap();
        assert!(matches!(r, LineFile::Real(_)));
        assert!(r.to_line().unwrap().validate().valid());
        assert!(parse_line(r#"{"x":[1,0]}"#).is_err());
    }

    #[test]
    fn section_rejects_boundary() {
        assert!(parse_section(r#"{"coords":[1,0,0,1,0]}"#).is_ok());
        assert!(parse_section(r#"{"coords":[1,0,0,0,0]}"#).is_err());
    }
}
