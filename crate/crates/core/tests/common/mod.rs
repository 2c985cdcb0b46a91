pub mod javagen;
