system counter {
  var i: int[0,30];
  var s: int[0,60];
  init: i = 0 && s = 0;
  next: i < 10 && i' = i + 1 && s' = s + 2;
  safe: s <= 20;
}
