//! Problem files and the commands behind the `orbeq` binary.

pub mod commands;
pub mod problem;

use clap::ValueEnum;

#[derive(Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ExportArg {
    Native,
    MqStyle,
}
