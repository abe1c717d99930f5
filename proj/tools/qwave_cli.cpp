#include <cstdio>

int main() {
  std::puts("qwave cli placeholder");
  return 0;
}
