#include <iostream>

#include "logicsim/cli.hpp"
#include "logicsim/server.hpp"

namespace {

int serve(const logicsim::cli::ServeOptions& opts, logicsim::cli::Streams io) {
  const auto colon = opts.addr.rfind(':');
  if (colon == std::string::npos) {
    io.err << "error: --addr must be host:port\n";
    return logicsim::cli::exit_usage;
  }
  const auto host = opts.addr.substr(0, colon);
  unsigned long port = 0;
  try {
    port = std::stoul(opts.addr.substr(colon + 1));
  } catch (const std::exception&) {
    port = 70000;
  }
  if (port > 65535) {
    io.err << "error: bad port in --addr '" << opts.addr << "'\n";
    return logicsim::cli::exit_usage;
  }

  std::optional<std::filesystem::path> ui_dir;
  if (!opts.ui_dir.empty()) {
    ui_dir = opts.ui_dir;
  } else if (std::filesystem::is_directory("web/dist")) {
    ui_dir = "web/dist";
  }

  logicsim::SessionService service({opts.data_dir, opts.table_cap});
  logicsim::Server server(service, ui_dir);
  try {
    server.listen(host, static_cast<unsigned short>(port));
  } catch (const boost::system::system_error& e) {
    io.err << "error: cannot listen on " << opts.addr << ": " << e.code().message() << '\n';
    return logicsim::cli::exit_usage;
  }
  io.out << "listening on http://" << host << ':' << server.port() << std::endl;
  if (ui_dir) io.out << "serving UI from " << ui_dir->string() << std::endl;
  server.run();
  return logicsim::cli::exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  return logicsim::cli::run(argc, argv, {std::cin, std::cout, std::cerr}, serve);
}
