#pragma once

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>

#include "logicsim/netlist.hpp"
#include "logicsim/truth_table.hpp"

// `logicsim` command line: eval, table, check, fmt, serve.
// Exit codes: 0 success, 1 usage or parse error, 2 diagnostics (--strict / check).

namespace logicsim::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_diagnostics = 2;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

/// Hook for `serve`; the CLI binary installs one that starts the server.
struct ServeOptions {
  std::string addr = "127.0.0.1:8080";
  std::string data_dir = "circuits";
  std::string ui_dir;
  std::size_t table_cap = default_table_input_cap;
};
using ServeHook = std::function<int(const ServeOptions&, Streams)>;

namespace detail {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_source(const std::string& file, std::istream& in) {
  std::ostringstream text;
  if (file == "-") {
    text << in.rdbuf();
    return text.str();
  }
  std::ifstream f(file, std::ios::binary);
  if (!f) throw usage_error("cannot open '" + file + "'");
  text << f.rdbuf();
  return text.str();
}

inline std::string pin_text(const Circuit& c, const std::map<ElementId, std::string>& names, const PinRef& p) {
  return names.at(p.element) + "." + pin_label(c.element(p.element), p);
}

inline std::string describe(const Circuit& c, const std::map<ElementId, std::string>& names, const Diagnostic& d) {
  std::string s;
  if (d.kind == Diagnostic::Kind::FloatingInput) {
    s = "floating input:";
    for (const auto& p : d.pins) s += " " + pin_text(c, names, p);
    return s;
  }
  s = "combinational cycle:";
  for (std::size_t i = 0; i < d.elements.size(); ++i) s += (i ? ", " : " ") + names.at(d.elements[i]);
  return s;
}

// Applies `name=0|1` overrides to switches.
inline void apply_overrides(Circuit& c, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw usage_error("--set expects name=0|1, got '" + s + "'");
    auto name = s.substr(0, eq), value = s.substr(eq + 1);
    if (value != "0" && value != "1") throw usage_error("--set value for '" + name + "' must be 0 or 1");
    auto id = c.find_by_name(name);
    if (!id) throw usage_error("--set: no element named '" + name + "'");
    if (!c.element(*id).is_switch()) throw usage_error("--set: '" + name + "' is not a switch");
    c.set_switch(*id, value == "1");
  }
}

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) throw usage_error("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw usage_error("cannot replace '" + path.string() + "': " + ec.message());
}

}  // namespace detail

/// Truth table as aligned text (`A B | S C0`) or CSV (`A,B,S,C0`).
inline std::string render_table(const Circuit& c, const TruthTable& t, bool csv) {
  const auto names = element_names(c);
  std::vector<std::string> header;
  for (auto id : t.inputs) header.push_back(names.at(id));
  for (auto id : t.outputs) header.push_back(names.at(id));

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (bool b : r.inputs) cells.emplace_back(b ? "1" : "0");
    for (auto l : r.outputs) cells.emplace_back(1, level_char(l));
    rows.push_back(std::move(cells));
  }

  std::string out;
  if (csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) s += (i == t.inputs.size()) ? " | " : " ";
      s += cells[i] + std::string(width[i] - std::min(width[i], cells[i].size()), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out += s + '\n';
  };
  if (!header.empty()) {
    if (t.inputs.empty()) out += "| ";
    line(header);
    for (const auto& r : rows) {
      if (t.inputs.empty()) out += "| ";
      line(r);
    }
  }
  return out;
}

inline int run(int argc, const char* const* argv, Streams io, const ServeHook& serve_hook = {}) {
  CLI::App app{"Gate-level logic circuit simulator", "logicsim"};
  app.require_subcommand(1);

  std::string file;
  std::vector<std::string> sets;
  bool strict = false, write = false;
  std::string format = "text";
  std::size_t cap = default_table_input_cap;
  ServeOptions serve;

  auto eval_cmd = app.add_subcommand("eval", "Evaluate a circuit and print indicator states");
  eval_cmd->add_option("file", file, "Netlist (.lgc) or '-' for stdin")->required();
  eval_cmd->add_option("--set", sets, "Override a switch: name=0|1")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_flag("--strict", strict, "Exit 2 when diagnostics are present");

  auto table_cmd = app.add_subcommand("table", "Print the truth table over all switches");
  table_cmd->add_option("file", file, "Netlist (.lgc) or '-' for stdin")->required();
  table_cmd->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  table_cmd->add_option("--cap", cap, "Maximum number of switches")->envname("LOGICSIM_TABLE_CAP");

  auto check_cmd = app.add_subcommand("check", "Report floating inputs and combinational cycles");
  check_cmd->add_option("file", file, "Netlist (.lgc) or '-' for stdin")->required();

  auto fmt_cmd = app.add_subcommand("fmt", "Print the canonical form of a netlist");
  fmt_cmd->add_option("file", file, "Netlist (.lgc) or '-' for stdin")->required();
  fmt_cmd->add_flag("--write,-w", write, "Rewrite the file in place");

  auto serve_cmd = app.add_subcommand("serve", "Run the editor session service");
  serve_cmd->add_option("--addr", serve.addr, "host:port to listen on")->envname("LOGICSIM_ADDR");
  serve_cmd->add_option("--data-dir", serve.data_dir, "Directory for saved circuits")->envname("LOGICSIM_DATA_DIR");
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Directory with the built UI bundle")->envname("LOGICSIM_UI_DIR");
  serve_cmd->add_option("--table-cap", serve.table_cap, "Maximum switches for truth tables")
      ->envname("LOGICSIM_TABLE_CAP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*serve_cmd) {
      if (!serve_hook) throw detail::usage_error("serve is not available in this build");
      return serve_hook(serve, io);
    }

    const auto text = detail::read_source(file, io.in);
    Circuit circuit;
    try {
      circuit = parse(text);
    } catch (const parse_error& e) {
      io.err << (file == "-" ? "<stdin>" : file) << ":" << e.line() << ":" << e.column() << ": error: " << e.message()
             << " [" << parse_error_name(e.kind()) << "]\n";
      return exit_usage;
    }
    const auto names = element_names(circuit);

    if (*eval_cmd) {
      detail::apply_overrides(circuit, sets);
      const auto result = evaluate(circuit);
      for (const auto& [id, state] : result.indicators) io.out << names.at(id) << ": " << indicator_name(state) << '\n';
      for (const auto& d : result.diagnostics) io.err << "warning: " << detail::describe(circuit, names, d) << '\n';
      return strict && !result.diagnostics.empty() ? exit_diagnostics : exit_ok;
    }
    if (*table_cmd) {
      TruthTable t;
      try {
        t = truth_table(circuit, cap);
      } catch (const circuit_error& e) {
        io.err << "error: " << e.what() << '\n';
        return exit_usage;
      }
      io.out << render_table(circuit, t, format == "csv");
      return exit_ok;
    }
    if (*check_cmd) {
      const auto result = evaluate(circuit);
      for (const auto& d : result.diagnostics) io.out << detail::describe(circuit, names, d) << '\n';
      return result.diagnostics.empty() ? exit_ok : exit_diagnostics;
    }
    if (*fmt_cmd) {
      const auto canonical = serialize(circuit);
      if (write) {
        if (file == "-") throw detail::usage_error("--write needs a file path");
        if (canonical != text) detail::write_atomically(file, canonical);
      } else {
        io.out << canonical;
      }
      return exit_ok;
    }
  } catch (const detail::usage_error& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace logicsim::cli
