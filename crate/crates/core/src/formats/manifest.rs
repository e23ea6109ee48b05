//! Frame manifests: a TOML file listing the specifications of a frame with
//! their format and file location.
//!
//! ```toml
//! [[spec]]
//! name = "m1"
//! kind = "net"          # "declare" | "net" | "dfa"
//! path = "m1.net"       # relative to the manifest file
//! alphabet = ["A", "B"] # optional; inferred from the body when absent
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{declare_text, dfa_text, net_text, pnml, FormatError};
use crate::events::Activity;
use crate::frame::{FrameError, ProcessFrame, SpecBody, Specification};

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(rename = "spec")]
    pub specs: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub kind: SpecKind,
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Declare,
    Net,
    Dfa,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

/// Loads a frame from a manifest file, resolving spec paths relative to the
/// manifest's directory. Net files may be native text or PNML (by
/// extension).
pub fn load_frame(path: &Path) -> Result<ProcessFrame, ManifestError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    let manifest: Manifest = toml::from_str(&text).map_err(|e| ManifestError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut specs = Vec::new();
    for entry in &manifest.specs {
        let file = base.join(&entry.path);
        let body = match entry.kind {
            SpecKind::Declare => SpecBody::Declare(declare_text::read_constraints(&file)?),
            SpecKind::Net => {
                if file.extension().and_then(|e| e.to_str()) == Some("pnml") {
                    SpecBody::Net(pnml::read_pnml(&file)?)
                } else {
                    SpecBody::Net(net_text::read_net(&file)?)
                }
            }
            SpecKind::Dfa => SpecBody::Dfa(dfa_text::read_dfa(&file)?),
        };
        let spec = match &entry.alphabet {
            Some(names) => {
                let alphabet = names
                    .iter()
                    .map(Activity::new)
                    .collect::<Result<_, _>>()
                    .map_err(|e| ManifestError::Invalid {
                        path: file.display().to_string(),
                        message: e.to_string(),
                    })?;
                Specification::new(&entry.name, alphabet, body)?
            }
            None => Specification::inferred(&entry.name, body),
        };
        specs.push(spec);
    }
    Ok(ProcessFrame::new(specs)?)
}

/// Writes a frame into `dir`: one body file per specification plus the
/// manifest itself. Returns the manifest path.
pub fn save_frame(frame: &ProcessFrame, dir: &Path, manifest_name: &str) -> Result<PathBuf, ManifestError> {
    fs::create_dir_all(dir).map_err(|e| FormatError::io(dir, e))?;
    let mut entries = Vec::new();
    for spec in frame.specs() {
        let (kind, file_name) = match spec.body() {
            SpecBody::Declare(_) => (SpecKind::Declare, format!("{}.decl", spec.name())),
            SpecBody::Net(_) => (SpecKind::Net, format!("{}.net", spec.name())),
            SpecBody::Dfa(_) => (SpecKind::Dfa, format!("{}.dfa", spec.name())),
        };
        let file = dir.join(&file_name);
        match spec.body() {
            SpecBody::Declare(cs) => declare_text::write_constraints(&file, cs)?,
            SpecBody::Net(net) => net_text::write_net(&file, net)?,
            SpecBody::Dfa(dfa) => dfa_text::write_dfa(&file, dfa)?,
        }
        entries.push(ManifestEntry {
            name: spec.name().to_string(),
            kind,
            path: file_name,
            alphabet: Some(spec.alphabet().iter().map(|a| a.name().to_string()).collect()),
        });
    }
    let manifest = Manifest { specs: entries };
    let path = dir.join(manifest_name);
    let text = toml::to_string_pretty(&manifest).map_err(|e| ManifestError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(&path, text).map_err(|e| FormatError::io(&path, e))?;
    Ok(path)
}
