#include "skirmish/client.hpp"

#include "skirmish/errors.hpp"

namespace skirmish {

namespace {

[[noreturn]] void raise_unexpected(const Message& msg, const char* expected) {
  if (const auto* err = std::get_if<Error>(&msg)) throw ServerError(err->code, err->text);
  throw ProtocolError(std::string("expected ") + expected + ", got " + tag_name(tag_of(msg)));
}

} // namespace

Client Client::connect(const Endpoint& endpoint, ClientOptions options) {
  Client c;
  try {
    c.conn_ = Connection::open(endpoint);
    c.conn_.set_receive_timeout(options.handshake_timeout);
    c.send_message(Hello{options.proto_version, options.name, options.requested_role});
    Message reply = c.receive_message();
    auto* setup = std::get_if<Setup>(&reply);
    if (setup == nullptr) raise_unexpected(reply, "SETUP");
    c.state_.setup = std::move(*setup);
    c.conn_.set_receive_timeout(options.receive_timeout);
  } catch (const ConnectionError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConnectionError("connect to " + endpoint.to_string() + " failed: " + e.what());
  }
  return c;
}

Message Client::receive_message() {
  auto payload = conn_.try_receive_payload();
  if (!payload) throw ConnectionError("server closed the connection");
  if (tap_) tap_(false, *payload);
  return decode_message(*payload);
}

void Client::send_message(const Message& msg) {
  const Bytes payload = encode_message(msg);
  conn_.send_payload(payload);
  if (tap_) tap_(true, payload);
}

const ClientState& Client::receive() {
  if (awaiting_commands_) throw UsageError("receive called twice without send_commands");
  if (state_.game_ended) throw UsageError("receive after END; restart or reconnect first");
  Message msg = receive_message();
  if (auto* s = std::get_if<State>(&msg)) {
    state_.latest_frame = std::move(s->frame);
    awaiting_commands_ = true;
  } else if (const auto* end = std::get_if<End>(&msg)) {
    state_.game_ended = true;
    state_.last_result = end->result;
    state_.final_frame = end->final_frame;
  } else {
    raise_unexpected(msg, "STATE or END");
  }
  return state_;
}

void Client::send_commands(std::span<const Command> cmds) {
  if (state_.game_ended) throw UsageError("send_commands after END");
  if (!awaiting_commands_) throw UsageError("send_commands before receive");
  send_message(Commands{{cmds.begin(), cmds.end()}});
  awaiting_commands_ = false;
}

void Client::restart() {
  if (!state_.game_ended) throw UsageError("restart is only valid after END");
  send_message(Restart{});
  Message reply = receive_message();
  auto* setup = std::get_if<Setup>(&reply);
  if (setup == nullptr) raise_unexpected(reply, "SETUP");
  state_ = ClientState{};
  state_.setup = std::move(*setup);
  awaiting_commands_ = false;
}

void Client::quit() {
  if (!conn_.is_open()) return;
  try {
    send_message(Quit{});
  } catch (const NetError&) {
    // peer already gone
  }
  conn_.close();
}

} // namespace skirmish
