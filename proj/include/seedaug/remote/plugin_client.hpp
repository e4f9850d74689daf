#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "seedaug/remote/protocol.hpp"

namespace seedaug {

// Moves one request line to the plugin and one response line back.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws PluginTimeout or TransportFailure.
  virtual std::string exchange(const std::string& frame, std::chrono::milliseconds timeout) = 0;
  // Drops the current connection or process; the next exchange reconnects.
  virtual void reset() = 0;
  // Whether exchanges may run concurrently.
  virtual bool concurrent() const = 0;
};

// Child process speaking newline-delimited JSON over stdin/stdout.
class SubprocessTransport final : public Transport {
 public:
  explicit SubprocessTransport(std::string command_line);
  ~SubprocessTransport() override;
  SubprocessTransport(const SubprocessTransport&) = delete;
  SubprocessTransport& operator=(const SubprocessTransport&) = delete;

  std::string exchange(const std::string& frame, std::chrono::milliseconds timeout) override;
  void reset() override;
  bool concurrent() const override { return false; }

 private:
  void spawn();
  void terminate();

  std::vector<std::string> argv_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// POSTs each frame to <base>/augment.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::string base_url);

  std::string exchange(const std::string& frame, std::chrono::milliseconds timeout) override;
  void reset() override {}
  bool concurrent() const override { return true; }

 private:
  std::string base_url_;
};

std::unique_ptr<Transport> make_transport(const PluginEndpoint& endpoint);

// Engine side of the plugin protocol. Performs the handshake on first use
// (and again after a reset), retries a request once after a transport
// failure or timeout, and serializes requests when the transport needs it.
class PluginClient {
 public:
  explicit PluginClient(PluginEndpoint endpoint);
  PluginClient(PluginEndpoint endpoint, std::unique_ptr<Transport> transport);

  const PluginEndpoint& endpoint() const { return endpoint_; }

  // Runs the handshake now; returns the methods the plugin announced.
  std::vector<MethodId> handshake();

  // Candidate strings, trimmed, in plugin order.
  std::vector<std::string> request_candidates(const PluginRequest& req);

 private:
  std::vector<std::string> attempt(const std::string& frame, std::size_t n);
  void ensure_ready_locked();
  std::vector<MethodId> handshake_locked();

  PluginEndpoint endpoint_;
  std::unique_ptr<Transport> transport_;
  std::mutex mutex_;
  bool ready_ = false;
};

// Free-function form of PluginClient::request_candidates.
std::vector<std::string> request_candidates(PluginClient& client, const PluginRequest& req);

}  // namespace seedaug
