pub mod class_sums;
