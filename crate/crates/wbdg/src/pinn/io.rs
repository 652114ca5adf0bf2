use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::net::Mlp;
use crate::error::{Error, Result};

pub const WEIGHT_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Clone)]
pub struct LayerJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major weights.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct WeightFile {
    pub format_version: u32,
    pub model_tag: String,
    pub boundary_op_tag: String,
    pub mu_box: Vec<[f64; 2]>,
    pub activation: String,
    pub layers: Vec<LayerJson>,
    /// FNV-1a 64 over the parameter digest, hex encoded.
    pub checksum: String,
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Shortest round-trip decimal forms of every parameter, joined by commas
/// in file order. Stable across platforms and exact under re-parsing.
fn param_digest(layers: &[LayerJson]) -> String {
    let mut parts = Vec::new();
    for layer in layers {
        for w in &layer.weights {
            parts.push(format!("{w}"));
        }
        for b in &layer.bias {
            parts.push(format!("{b}"));
        }
    }
    parts.join(",")
}

fn file_error(path: &Path, what: impl Into<String>) -> Error {
    Error::WeightFile {
        path: path.display().to_string(),
        what: what.into(),
    }
}

fn layers_of(net: &Mlp) -> Vec<LayerJson> {
    (0..net.n_layers())
        .map(|l| {
            let (rows, cols) = net.layer_dims(l);
            LayerJson {
                rows,
                cols,
                weights: net.layer_weights(l).to_vec(),
                bias: net.layer_bias(l).to_vec(),
            }
        })
        .collect()
}

pub fn save_weights(
    path: &Path,
    net: &Mlp,
    model_tag: &str,
    boundary_op_tag: &str,
    mu_box: &[(f64, f64)],
) -> Result<()> {
    let layers = layers_of(net);
    let checksum = format!("{:016x}", fnv1a64(param_digest(&layers).as_bytes()));
    let file = WeightFile {
        format_version: WEIGHT_FORMAT_VERSION,
        model_tag: model_tag.to_string(),
        boundary_op_tag: boundary_op_tag.to_string(),
        mu_box: mu_box.iter().map(|&(lo, hi)| [lo, hi]).collect(),
        activation: "tanh".to_string(),
        layers,
        checksum,
    };
    let json = serde_json::to_string_pretty(&file)?;
    fs::write(path, json)?;
    Ok(())
}

pub fn load_weights(path: &Path) -> Result<(Mlp, WeightFile)> {
    let text = fs::read_to_string(path)?;
    let file: WeightFile =
        serde_json::from_str(&text).map_err(|e| file_error(path, e.to_string()))?;
    if file.format_version != WEIGHT_FORMAT_VERSION {
        return Err(file_error(
            path,
            format!("unsupported format version {}", file.format_version),
        ));
    }
    if file.activation != "tanh" {
        return Err(file_error(
            path,
            format!("unsupported activation {:?}", file.activation),
        ));
    }
    if file.layers.is_empty() {
        return Err(file_error(path, "no layers"));
    }
    let expected = format!("{:016x}", fnv1a64(param_digest(&file.layers).as_bytes()));
    if expected != file.checksum {
        return Err(file_error(
            path,
            format!("checksum mismatch: stored {}, computed {expected}", file.checksum),
        ));
    }
    let mut sizes = vec![file.layers[0].cols];
    for (l, layer) in file.layers.iter().enumerate() {
        if layer.cols != sizes[l] {
            return Err(file_error(
                path,
                format!("layer {l} expects {} inputs, previous layer yields {}", layer.cols, sizes[l]),
            ));
        }
        if layer.weights.len() != layer.rows * layer.cols || layer.bias.len() != layer.rows {
            return Err(file_error(path, format!("layer {l} has inconsistent shapes")));
        }
        sizes.push(layer.rows);
    }
    let net = Mlp::from_layers(
        &sizes,
        file.layers
            .iter()
            .map(|l| (l.weights.clone(), l.bias.clone())),
    );
    Ok((net, file))
}
