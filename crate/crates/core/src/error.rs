use thiserror::Error;

use crate::image::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({}, {}) is outside the {width}x{height} image", .point.x, .point.y)]
    OutOfBounds { point: Point, width: usize, height: usize },

    #[error("inner point is an edge pixel at ({}, {})", .0.x, .0.y)]
    EdgePixel(Point),

    #[error("pgm parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("scene construction failed: {0}")]
    Scene(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("open contour: region around ({}, {}) touches the image border", .0.x, .0.y)]
    OpenContour(Point),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
