#pragma once

#include <map>
#include <memory>
#include <string>

namespace factreason {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpHeaders = std::map<std::string, std::string>;

/// Minimal HTTP surface used by the chat client and retrievers. Tests substitute
/// a canned implementation; production uses HttplibTransport.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& url, const HttpHeaders& headers) = 0;
    virtual HttpResponse post(const std::string& url, const HttpHeaders& headers,
                              const std::string& body, const std::string& content_type) = 0;
};

/// cpp-httplib backed transport. Throws TransportError on connection failure.
class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(int timeout_seconds = 30);
    HttpResponse get(const std::string& url, const HttpHeaders& headers) override;
    HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body,
                      const std::string& content_type) override;

private:
    int timeout_seconds_;
};

/// Splits an absolute URL into (scheme://host[:port], path?query).
std::pair<std::string, std::string> split_url(const std::string& url);

std::string url_encode(const std::string& value);

}  // namespace factreason
