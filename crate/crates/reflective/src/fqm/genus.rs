//! Genus enumeration and existence.
