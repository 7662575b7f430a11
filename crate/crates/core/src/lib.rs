pub mod flight;
pub mod fuzzy;
pub mod neural;
pub mod raster;
pub mod sidewalk;
pub mod vision;
