#include "seedaug/remote/plugin_client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <sstream>

#include <httplib.h>

#include "seedaug/core/text.hpp"

extern char** environ;

namespace seedaug {

namespace {

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left < 0 ? 0 : static_cast<int>(left);
}

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

}  // namespace

// ---- SubprocessTransport ----

SubprocessTransport::SubprocessTransport(std::string command_line) {
  std::istringstream in(command_line);
  std::string arg;
  while (in >> arg) argv_.push_back(arg);
  if (argv_.empty()) throw std::invalid_argument("empty plugin command line");
  ignore_sigpipe();
}

SubprocessTransport::~SubprocessTransport() { terminate(); }

void SubprocessTransport::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportFailure(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportFailure(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_t pid = -1;
  int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw TransportFailure("cannot start plugin " + argv_[0] + ": " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
  ::fcntl(from_child_, F_SETFL, ::fcntl(from_child_, F_GETFL) | O_NONBLOCK);
  buffer_.clear();
}

void SubprocessTransport::terminate() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status = 0;
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
  buffer_.clear();
}

void SubprocessTransport::reset() { terminate(); }

std::string SubprocessTransport::exchange(const std::string& frame, std::chrono::milliseconds timeout) {
  if (pid_ < 0) spawn();
  const auto deadline = Clock::now() + timeout;

  std::string out = frame;
  out.push_back('\n');
  std::size_t sent = 0;
  while (sent < out.size()) {
    pollfd p{to_child_, POLLOUT, 0};
    int r = ::poll(&p, 1, remaining_ms(deadline));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) throw PluginTimeout("plugin did not accept the request within " +
                                    std::to_string(timeout.count()) + " ms");
    if (r < 0 || (p.revents & (POLLERR | POLLHUP)))
      throw TransportFailure("plugin closed its input");
    ssize_t n = ::write(to_child_, out.data() + sent, out.size() - sent);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      throw TransportFailure(std::string("write to plugin: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }

  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    pollfd p{from_child_, POLLIN, 0};
    int r = ::poll(&p, 1, remaining_ms(deadline));
    if (r < 0 && errno == EINTR) continue;
    if (r == 0) throw PluginTimeout("plugin did not answer within " + std::to_string(timeout.count()) + " ms");
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      throw TransportFailure(std::string("read from plugin: ") + std::strerror(errno));
    }
    if (n == 0) {
      if (!buffer_.empty())
        throw ProtocolViolation("plugin exited mid-frame: " + buffer_.substr(0, 200));
      throw TransportFailure("plugin exited");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

// ---- HttpTransport ----

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string HttpTransport::exchange(const std::string& frame, std::chrono::milliseconds timeout) {
  httplib::Client client(base_url_);
  const auto secs = timeout.count() / 1000;
  const auto usecs = (timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const auto start = Clock::now();
  auto res = client.Post("/augment", frame + "\n", "application/json");
  if (!res) {
    if (Clock::now() - start >= timeout)
      throw PluginTimeout("plugin did not answer within " + std::to_string(timeout.count()) + " ms");
    throw TransportFailure("http plugin unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300)
    throw TransportFailure("http plugin returned status " + std::to_string(res->status));
  std::string body = res->body;
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
  if (body.find('\n') != std::string::npos) throw ProtocolViolation("http plugin returned several frames");
  return body;
}

std::unique_ptr<Transport> make_transport(const PluginEndpoint& endpoint) {
  if (endpoint.transport == PluginEndpoint::Transport::http)
    return std::make_unique<HttpTransport>(endpoint.address);
  return std::make_unique<SubprocessTransport>(endpoint.address);
}

// ---- PluginClient ----

PluginClient::PluginClient(PluginEndpoint endpoint)
    : PluginClient(endpoint, make_transport(endpoint)) {}

PluginClient::PluginClient(PluginEndpoint endpoint, std::unique_ptr<Transport> transport)
    : endpoint_(std::move(endpoint)), transport_(std::move(transport)) {
  endpoint_.validate();
}

std::vector<MethodId> PluginClient::handshake_locked() {
  auto methods = decode_ready(transport_->exchange(encode_hello(), endpoint_.timeout));
  if (std::find(methods.begin(), methods.end(), endpoint_.method) == methods.end())
    throw MethodMismatch("plugin does not serve " + std::string(to_string(endpoint_.method)));
  ready_ = true;
  return methods;
}

void PluginClient::ensure_ready_locked() {
  if (!ready_) handshake_locked();
}

std::vector<MethodId> PluginClient::handshake() {
  std::lock_guard lock(mutex_);
  for (int attempt = 0;; ++attempt) {
    try {
      return handshake_locked();
    } catch (const TransportFailure&) {
      if (attempt > 0) throw;
    } catch (const PluginTimeout&) {
      if (attempt > 0) throw;
    }
    transport_->reset();
  }
}

std::vector<std::string> PluginClient::request_candidates(const PluginRequest& req) {
  if (req.method != endpoint_.method)
    throw MethodMismatch("request for " + std::string(to_string(req.method)) + " sent to a " +
                         std::string(to_string(endpoint_.method)) + " plugin");
  req.validate();
  const std::string frame = encode_request(req);

  std::string line;
  for (int attempt = 0;; ++attempt) {
    try {
      if (transport_->concurrent()) {
        {
          std::lock_guard lock(mutex_);
          ensure_ready_locked();
        }
        line = transport_->exchange(frame, endpoint_.timeout);
      } else {
        std::lock_guard lock(mutex_);
        ensure_ready_locked();
        line = transport_->exchange(frame, endpoint_.timeout);
      }
      break;
    } catch (const PluginFailure& e) {
      const bool retryable = dynamic_cast<const TransportFailure*>(&e) || dynamic_cast<const PluginTimeout*>(&e);
      if (!retryable || attempt > 0) throw;
      std::lock_guard lock(mutex_);
      // A timed-out process may still answer later; start over so frames stay aligned.
      transport_->reset();
      ready_ = false;
    }
  }

  auto resp = decode_response(line, req.n);
  if (resp.error) throw PluginError(resp.error->code, resp.error->message);
  for (auto& c : resp.candidates) c = trim(c);
  return resp.candidates;
}

std::vector<std::string> request_candidates(PluginClient& client, const PluginRequest& req) {
  return client.request_candidates(req);
}

}  // namespace seedaug
