//! Synthetic traffic-sign rasters: rendering, perturbation and datasets.

mod dataset;
mod font;
mod palette;
mod perturb;
mod raster;
mod render;

use thiserror::Error;

pub use dataset::{
    dataset_specs, generate_dataset, manifest, read_manifest, write_dataset, DatasetConfig, DatasetItem, ManifestEntry,
    Variant, DEFAULT_SCALE, OTHER_LABEL, STOP_LABEL,
};
pub use font::{agreement, Glyph, GlyphFont, GLYPH_H, GLYPH_W};
pub use palette::{nearest, NamedColor, Rgb, BACKGROUND};
pub use perturb::{perturb, Ellipse, Perturbation, Perturbed};
pub use raster::{PpmError, Raster};
pub use render::{
    legend_cell, raster_side, rect_half_extents, render, render_layers, render_with_font, Legend, Rect, Rendered,
    Shape, SignGeometry, SignSpec, BORDER_FRAC,
};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("scale must be positive")]
    ZeroScale,
    #[error("legend '{0}' does not fit inside the sign")]
    LegendTooLong(String),
    #[error("no glyph for character '{0}'")]
    NoGlyph(char),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
