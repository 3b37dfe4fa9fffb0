system eu_branch {
  var x: int[0,8];
  init: x = 0 || x = 1;
  next: x' = x + 2 || x' = 0;
  p: x < 6;
  q: x = 6;
}
