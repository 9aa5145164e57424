pub mod batch;
pub mod bench;
pub mod dbm;
pub mod explore;
pub mod model;
pub mod oracle;
pub mod zones;
