#include <cstdio>
int main() { std::puts("specdet stub"); return 0; }
