// Chat server: serves frozen Q-tables over HTTP.
#include <csignal>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "mixdialog/http_api.hpp"

using namespace mixdialog;

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serve trained dialog policies over HTTP"};
  std::string config_path;
  app.add_option("-c,--config", config_path, "Service config (JSON)")->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    ServiceConfig config = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
    config.apply_env([](const char* name) { return std::getenv(name); });
    config.validate();

    const Resources resources = Resources::load(config.data_dir);
    auto models = load_models(config.model_dir);
    for (Variant v : kAllVariants) {
      if (!models.count(v)) {
        std::cerr << "warning: no " << to_string(v) << " table in " << config.model_dir.string()
                  << ", serving it with an empty table\n";
      }
    }
    ChatService service(resources, std::move(models), config.log_path);

    httplib::Server server;
    register_routes(server, service, config.allow_origin);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    const int port = config.port == 0 ? server.bind_to_any_port(config.host) : config.port;
    if (config.port != 0 && !server.bind_to_port(config.host, config.port)) {
      std::cerr << "error: cannot bind " << config.host << ":" << config.port << "\n";
      return 1;
    }
    if (port < 0) {
      std::cerr << "error: cannot bind " << config.host << "\n";
      return 1;
    }
    std::cout << "listening on http://" << config.host << ":" << port << " (log " << config.log_path.string() << ")"
              << std::endl;
    server.listen_after_bind();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
